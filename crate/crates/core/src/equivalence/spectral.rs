//! Exact characteristic polynomials of adjacency matrices over big
//! integers, and co-spectrality.

use std::fmt;

use num_bigint::BigInt;

use crate::structures::FinStructure;

/// Monic characteristic polynomial with exact integer coefficients,
/// `coeffs[i]` the coefficient of `x^i`, degree equal to the vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == BigInt::from(0) && i != 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let term = if var.is_empty() {
                c.to_string()
            } else if *c == BigInt::from(1) {
                var
            } else if *c == BigInt::from(-1) {
                format!("-{var}")
            } else {
                format!("{c}{var}")
            };
            terms.push(term);
        }
        if terms.is_empty() || (terms.len() == 1 && terms[0] == "0") {
            return f.write_str("1"); // degree-0 polynomial of the empty graph
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            if t == "0" {
                continue;
            }
            if let Some(stripped) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        f.write_str(&out)
    }
}

fn adjacency(g: &FinStructure) -> Vec<Vec<BigInt>> {
    let n = g.size();
    let mut a = vec![vec![BigInt::from(0); n]; n];
    for (u, v) in g.edges() {
        a[u][v] = BigInt::from(1);
        a[v][u] = BigInt::from(1);
    }
    a
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::from(0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == BigInt::from(0) {
                continue;
            }
            for j in 0..n {
                let prod = &a[i][k] * &b[k][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

fn trace(a: &[Vec<BigInt>]) -> BigInt {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

/// The characteristic polynomial of the adjacency matrix, by the
/// Faddeev-LeVerrier recurrence. Every division in the recurrence is exact
/// over the integers.
pub fn char_poly(g: &FinStructure) -> CharPoly {
    let n = g.size();
    let a = adjacency(g);
    let mut coeffs = vec![BigInt::from(0); n + 1];
    coeffs[n] = BigInt::from(1);
    // m holds M_k; starts as M_1 = A
    let mut m = a.clone();
    for k in 1..=n {
        let neg_tr = -trace(&m);
        let c = &neg_tr / BigInt::from(k as i64);
        assert_eq!(&c * BigInt::from(k as i64), neg_tr, "inexact division");
        coeffs[n - k] = c.clone();
        if k < n {
            // M_{k+1} = A (M_k + c I)
            let mut shifted = m;
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] += &c;
            }
            m = mat_mul(&a, &shifted);
        }
    }
    CharPoly { coeffs }
}

/// Equal characteristic polynomials (hence equal vertex counts).
pub fn cospectral(a: &FinStructure, b: &FinStructure) -> bool {
    char_poly(a) == char_poly(b)
}
