//! Exact band operators on the circle lattice: finitely many shifts, each
//! carrying a polynomial in the mode number with rational coefficients.
//! These represent products of shifts and D-powers exactly, which is what
//! the residue-term certification needs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Polynomial in the mode number n, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    /// The polynomial `n + 1/2` (the operator spectrum in the mode number).
    pub fn d_symbol() -> Poly {
        Poly(vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::one(),
        ])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly(out).trim()
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trim()
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect()).trim()
    }

    fn trim(mut self) -> Poly {
        while matches!(self.0.last(), Some(c) if c.is_zero()) {
            self.0.pop();
        }
        self
    }

    /// Substitution n -> n + shift.
    pub fn shift_arg(&self, shift: i64) -> Poly {
        let mut out = Poly::zero();
        let sh = Poly(vec![
            BigRational::from_integer(BigInt::from(shift)),
            BigRational::one(),
        ]);
        // Horner on the shifted variable.
        for c in self.0.iter().rev() {
            out = out.mul(&sh).add(&Poly::constant(c.clone()));
        }
        out
    }

    /// Coefficients relative to x = n + 1/2: returns Q with
    /// `P(n) = Q(n + 1/2)`.
    pub fn in_half_shifted_variable(&self) -> Poly {
        // Q(x) = P(x - 1/2)
        let mut out = Poly::zero();
        let sh = Poly(vec![
            BigRational::new(BigInt::from(-1), BigInt::from(2)),
            BigRational::one(),
        ]);
        for c in self.0.iter().rev() {
            out = out.mul(&sh).add(&Poly::constant(c.clone()));
        }
        out
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.0.get(k).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Band operator: shift s carries polynomial entry `W[n+s, n] = P_s(n)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BandPoly {
    pub bands: BTreeMap<i64, Poly>,
}

impl BandPoly {
    pub fn zero() -> BandPoly {
        BandPoly::default()
    }

    pub fn identity() -> BandPoly {
        BandPoly::from_band(0, Poly::one())
    }

    pub fn from_band(shift: i64, p: Poly) -> BandPoly {
        let mut bands = BTreeMap::new();
        if !p.is_zero() {
            bands.insert(shift, p);
        }
        BandPoly { bands }
    }

    /// The shift by k (multiplication by the k-th circle harmonic).
    pub fn shift(k: i64) -> BandPoly {
        BandPoly::from_band(k, Poly::one())
    }

    /// The diagonal operator with entries n + 1/2.
    pub fn d_operator() -> BandPoly {
        BandPoly::from_band(0, Poly::d_symbol())
    }

    /// D^k for k >= 0.
    pub fn d_power(k: u32) -> BandPoly {
        let mut acc = BandPoly::identity();
        for _ in 0..k {
            acc = acc.mul(&BandPoly::d_operator());
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.bands.is_empty()
    }

    pub fn add(&self, other: &BandPoly) -> BandPoly {
        let mut bands = self.bands.clone();
        for (s, p) in &other.bands {
            let entry = bands.entry(*s).or_insert_with(Poly::zero);
            *entry = entry.add(p);
        }
        bands.retain(|_, p| !p.is_zero());
        BandPoly { bands }
    }

    pub fn neg(&self) -> BandPoly {
        BandPoly {
            bands: self
                .bands
                .iter()
                .map(|(s, p)| (*s, p.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &BandPoly) -> BandPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> BandPoly {
        let mut bands: BTreeMap<i64, Poly> = self
            .bands
            .iter()
            .map(|(s, p)| (*s, p.scale(c)))
            .collect();
        bands.retain(|_, p| !p.is_zero());
        BandPoly { bands }
    }

    /// Operator product: `(W V)[n] = sum over s2: W_{s1}(n + s2) V_{s2}(n)`.
    pub fn mul(&self, other: &BandPoly) -> BandPoly {
        let mut bands: BTreeMap<i64, Poly> = BTreeMap::new();
        for (s1, p1) in &self.bands {
            for (s2, p2) in &other.bands {
                let term = p1.shift_arg(*s2).mul(p2);
                let entry = bands.entry(s1 + s2).or_insert_with(Poly::zero);
                *entry = entry.add(&term);
            }
        }
        bands.retain(|_, p| !p.is_zero());
        BandPoly { bands }
    }

    pub fn diagonal(&self) -> Poly {
        self.bands.get(&0).cloned().unwrap_or_else(Poly::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_relations() {
        // u* u = 1 and [D, u] = u on the lattice model.
        let u = BandPoly::shift(1);
        let u_star = BandPoly::shift(-1);
        assert_eq!(u_star.mul(&u), BandPoly::identity());
        let d = BandPoly::d_operator();
        let comm = d.mul(&u).sub(&u.mul(&d));
        assert_eq!(comm, u);
    }

    #[test]
    fn d_conjugation_of_shift() {
        // D^2 u - u D^2 has band polynomial 2n + 2 on shift 1.
        let u = BandPoly::shift(1);
        let d2 = BandPoly::d_power(2);
        let nabla = d2.mul(&u).sub(&u.mul(&d2));
        let p = nabla.bands.get(&1).unwrap();
        // (n+1+1/2)^2 - (n+1/2)^2 = 2n + 2
        assert_eq!(p.coeff(0), BigRational::from_integer(BigInt::from(2)));
        assert_eq!(p.coeff(1), BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn half_variable_expansion() {
        // P(n) = n^2 -> Q(x) = (x - 1/2)^2 = x^2 - x + 1/4.
        let p = Poly(vec![
            BigRational::zero(),
            BigRational::zero(),
            BigRational::one(),
        ]);
        let q = p.in_half_shifted_variable();
        assert_eq!(q.coeff(0), BigRational::new(BigInt::from(1), BigInt::from(4)));
        assert_eq!(q.coeff(1), -BigRational::one());
        assert_eq!(q.coeff(2), BigRational::one());
    }
}
