//! Resultants by the Euclidean remainder sequence.
//!
//! Convention: res(f, g) = lc(f)^deg(g) * prod g(a) over the roots a of f,
//! so res(x - a, x - b) = a - b.

use super::field::Field;
use super::poly::Poly;
use super::AlgebraError;

pub fn resultant<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Result<F, AlgebraError> {
    if f.is_zero() || g.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    Ok(res(f.clone(), g.clone()))
}

fn res<F: Field>(f: Poly<F>, g: Poly<F>) -> F {
    let (df, dg) = (f.deg0(), g.deg0());
    if dg == 0 {
        return g.lc().pow(df as u64);
    }
    if df == 0 {
        return f.lc().pow(dg as u64);
    }
    // res(f, g) = (-1)^(df dg) res(g, f) and res(g, f) = lc(g)^(df - dr) res(g, f mod g)
    let r = f.rem(&g);
    if r.is_zero() {
        return F::zero();
    }
    let dr = r.deg0();
    let mut out = g.lc().pow((df - dr) as u64).mul(&res(g, r));
    if df % 2 == 1 && dg % 2 == 1 {
        out = out.neg();
    }
    out
}

/// Discriminant-style quantity res(f, f') used for separation bounds.
pub fn discriminant<F: Field>(f: &Poly<F>) -> Result<F, AlgebraError> {
    resultant(f, &f.derivative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::field::{int, Rational};

    type P = Poly<Rational>;

    #[test]
    fn frozen_values() {
        // (3 - 2)(3 - 2) over the roots of x^2 - 3
        assert_eq!(
            resultant(&P::from_ints(&[-2, 0, 1]), &P::from_ints(&[-3, 0, 1])).unwrap(),
            int(1)
        );
        assert_eq!(
            resultant(&P::from_ints(&[-1, 1]), &P::from_ints(&[-1, 1])).unwrap(),
            int(0)
        );
        assert_eq!(
            resultant(&P::from_ints(&[-2, 1]), &P::from_ints(&[-5, 1])).unwrap(),
            int(-3)
        );
        assert!(resultant(&P::zero(), &P::one()).is_err());
        // res(x^2 + 1, 2x + 3) = lc^2 prod over roots of x^2 + 1 = (2i + 3)(-2i + 3) = 13
        assert_eq!(
            resultant(&P::from_ints(&[1, 0, 1]), &P::from_ints(&[3, 2])).unwrap(),
            int(13)
        );
        assert_eq!(
            resultant(&P::from_ints(&[3, 2]), &P::from_ints(&[1, 0, 1])).unwrap(),
            int(13)
        );
    }

    #[test]
    fn sylvester_agreement() {
        // res(x^3 - 2x + 5, x^2 + 4x - 1), checked against the 5x5 Sylvester determinant
        let f = P::from_ints(&[5, -2, 0, 1]);
        let g = P::from_ints(&[-1, 4, 1]);
        assert_eq!(resultant(&f, &g).unwrap(), sylvester_det(&f, &g));
        assert_eq!(resultant(&g, &f).unwrap(), sylvester_det(&g, &f));
    }

    fn sylvester_det(f: &P, g: &P) -> Rational {
        let (m, n) = (f.deg0(), g.deg0());
        let size = m + n;
        let mut a = vec![vec![int(0); size]; size];
        for i in 0..n {
            for j in 0..=m {
                a[i][i + j] = f.coeff(m - j);
            }
        }
        for i in 0..m {
            for j in 0..=n {
                a[n + i][i + j] = g.coeff(n - j);
            }
        }
        det(a)
    }

    fn det(mut a: Vec<Vec<Rational>>) -> Rational {
        let n = a.len();
        let mut d = int(1);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !Field::is_zero(&a[r][c])) else {
                return int(0);
            };
            if p != c {
                a.swap(p, c);
                d = -d;
            }
            d *= a[c][c].clone();
            for r in c + 1..n {
                let k = &a[r][c] / &a[c][c];
                for j in c..n {
                    let v = &a[c][j] * &k;
                    a[r][j] -= v;
                }
            }
        }
        d
    }
}
