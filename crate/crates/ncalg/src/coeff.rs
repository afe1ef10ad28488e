//! Exact scalar coefficients.
//!
//! Coefficients live in the commutative ring generated over the Gaussian
//! rationals Q(i) by `sqrt(pi)`, `pi` and formal positive characters
//! `mu_g` (one per declared group generator), with the single reduction
//! `sqrtpi^2 -> pi`. The square root of `2i` is resolved eagerly as `1 + i`,
//! which keeps the ring an integral domain. Gamma at positive integer and
//! half-integer arguments evaluates into this ring exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Interned id of a group generator; the matching character symbol is `mu_<name>`.
pub type GroupId = u32;

/// A monomial in the formal generators: `sqrtpi^{0|1} * pi^k * prod mu_g^{e_g}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub sqrtpi: bool,
    pub pi: u32,
    /// Sorted by group id, exponents nonzero.
    pub mu: Vec<(GroupId, i64)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        !self.sqrtpi && self.pi == 0 && self.mu.is_empty()
    }

    /// Product of two monomials; `sqrtpi * sqrtpi` folds into `pi`.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut pi = self.pi + other.pi;
        let sqrtpi = match (self.sqrtpi, other.sqrtpi) {
            (true, true) => {
                pi += 1;
                false
            }
            (a, b) => a || b,
        };
        let mut mu: BTreeMap<GroupId, i64> = self.mu.iter().copied().collect();
        for &(g, e) in &other.mu {
            let slot = mu.entry(g).or_insert(0);
            *slot += e;
            if *slot == 0 {
                mu.remove(&g);
            }
        }
        Monomial {
            sqrtpi,
            pi,
            mu: mu.into_iter().collect(),
        }
    }
}

/// A Gaussian rational `re + im*i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        GaussRat {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn mul(&self, other: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn neg(&self) -> GaussRat {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn conj(&self) -> GaussRat {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

/// An exact coefficient: a finite sum of monomials with Gaussian-rational weights.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Coeff {
    terms: BTreeMap<Monomial, GaussRat>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::default()
    }

    pub fn one() -> Self {
        Coeff::from_gauss(GaussRat::one())
    }

    pub fn from_gauss(g: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !g.is_zero() {
            terms.insert(Monomial::one(), g);
        }
        Coeff { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Coeff::from_gauss(GaussRat {
            re: r,
            im: BigRational::zero(),
        })
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coeff::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Coeff::from_gauss(GaussRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        })
    }

    /// `sqrt(2i) = 1 + i`, resolved eagerly.
    pub fn sqrt_2i() -> Self {
        Coeff::from_gauss(GaussRat {
            re: BigRational::one(),
            im: BigRational::one(),
        })
    }

    pub fn sqrt_pi() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            Monomial {
                sqrtpi: true,
                ..Monomial::one()
            },
            GaussRat::one(),
        );
        Coeff { terms }
    }

    pub fn pi() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            Monomial {
                pi: 1,
                ..Monomial::one()
            },
            GaussRat::one(),
        );
        Coeff { terms }
    }

    /// The character symbol `mu_g` raised to `pow`.
    pub fn mu(g: GroupId, pow: i64) -> Self {
        if pow == 0 {
            return Coeff::one();
        }
        let mut terms = BTreeMap::new();
        terms.insert(
            Monomial {
                mu: vec![(g, pow)],
                ..Monomial::one()
            },
            GaussRat::one(),
        );
        Coeff { terms }
    }

    /// Gamma at the positive argument `half_arg/2`, exact.
    ///
    /// Integer arguments give factorials, half-integer arguments give
    /// `rational * sqrt(pi)` via the duplication ladder.
    pub fn gamma_half(half_arg: i64) -> Self {
        assert!(half_arg > 0, "gamma argument must be positive");
        if half_arg % 2 == 0 {
            let n = half_arg / 2;
            let mut acc = BigRational::one();
            for k in 1..n {
                acc *= BigRational::from_integer(BigInt::from(k));
            }
            Coeff::from_rational(acc)
        } else {
            // Gamma(1/2) = sqrt(pi), Gamma(x+1) = x Gamma(x).
            let mut acc = BigRational::one();
            let mut x = BigRational::new(BigInt::from(1), BigInt::from(2));
            let steps = (half_arg - 1) / 2;
            for _ in 0..steps {
                acc *= &x;
                x += BigRational::one();
            }
            let mut c = Coeff::sqrt_pi();
            c = c.mul(&Coeff::from_rational(acc));
            c
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        let mut terms = self.terms.clone();
        for (m, g) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(GaussRat::zero);
            *entry = entry.add(g);
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Coeff { terms }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Coeff {
        Coeff {
            terms: self
                .terms
                .iter()
                .map(|(m, g)| (m.clone(), g.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        let mut terms: BTreeMap<Monomial, GaussRat> = BTreeMap::new();
        for (m1, g1) in &self.terms {
            for (m2, g2) in &other.terms {
                let m = m1.mul(m2);
                let g = g1.mul(g2);
                let entry = terms.entry(m).or_insert_with(GaussRat::zero);
                *entry = entry.add(&g);
            }
        }
        terms.retain(|_, g| !g.is_zero());
        Coeff { terms }
    }

    pub fn scale_int(&self, n: i64) -> Coeff {
        self.mul(&Coeff::from_int(n))
    }

    /// Complex conjugate (characters and pi-powers are real).
    pub fn conj(&self) -> Coeff {
        Coeff {
            terms: self
                .terms
                .iter()
                .map(|(m, g)| (m.clone(), g.conj()))
                .collect(),
        }
    }

    /// True when the coefficient is a single monomial term.
    pub fn as_single(&self) -> Option<(&Monomial, &GaussRat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    /// Splits the coefficient into (monomial, gaussian weight) pairs.
    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, GaussRat)> {
        self.terms.into_iter()
    }

    /// Evaluates numerically, substituting concrete positive values for the
    /// character symbols via `mu_value` and f64 pi.
    pub fn eval_f64(&self, mu_value: &dyn Fn(GroupId) -> f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, g) in &self.terms {
            let mut w = 1.0;
            if m.sqrtpi {
                w *= std::f64::consts::PI.sqrt();
            }
            w *= std::f64::consts::PI.powi(m.pi as i32);
            for &(gid, e) in &m.mu {
                w *= mu_value(gid).powi(e as i32);
            }
            re += rat_f64(&g.re) * w;
            im += rat_f64(&g.im) * w;
        }
        (re, im)
    }
}

pub fn rat_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // Good enough for the magnitudes arising here.
    let nf = num.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let df = den.to_string().parse::<f64>().unwrap_or(f64::NAN);
    nf / df
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a single (monomial, weight) pair; used by the expression printer.
pub fn format_term(m: &Monomial, g: &GaussRat, name_of: &dyn Fn(GroupId) -> String) -> String {
    let mut factors: Vec<String> = Vec::new();
    let pure_re = g.im.is_zero();
    let pure_im = g.re.is_zero() && !g.im.is_zero();
    if pure_re {
        if !(g.re.is_one() && !(m.is_one())) {
            factors.push(fmt_rat(&g.re));
        }
    } else if pure_im {
        if g.im.is_one() {
            factors.push("i".into());
        } else if g.im == -BigRational::one() {
            factors.push("-i".into());
        } else {
            factors.push(format!("{}*i", fmt_rat(&g.im)));
        }
    } else {
        factors.push(format!("({}+{}*i)", fmt_rat(&g.re), fmt_rat(&g.im)));
    }
    if m.sqrtpi {
        factors.push("sqrtpi".into());
    }
    if m.pi > 0 {
        factors.push(if m.pi == 1 {
            "pi".into()
        } else {
            format!("pi^{}", m.pi)
        });
    }
    for &(gid, e) in &m.mu {
        let n = name_of(gid);
        factors.push(if e == 1 {
            format!("mu{}", n)
        } else {
            format!("mu{}^{}", n, e)
        });
    }
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, g)| format_term(m, g, &|gid| format!("{}", gid)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
