use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Graded lexicographic: total degree first, then `x_1 > x_2 > …`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with rational coefficients in a fixed number of variables.
/// Zero coefficients are never stored, so equality is equality of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

fn lcm_of_denominators<'a>(coeffs: impl Iterator<Item = &'a BigRational>) -> BigInt {
    coeffs.fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = MultiPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, BigRational::one())
    }

    /// The variable with index `k`.
    pub fn var(nvars: usize, k: usize) -> Self {
        assert!(k < nvars);
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.terms.insert(Monomial(e), BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        // the last key is the largest in graded order
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn homogeneous_component(&self, d: usize) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Nonzero homogeneous components, by ascending degree.
    pub fn homogeneous_components(&self) -> Vec<(usize, MultiPoly)> {
        let mut out: Vec<(usize, MultiPoly)> = Vec::new();
        for (m, c) in &self.terms {
            let d = m.degree();
            match out.last_mut() {
                Some((last, p)) if *last == d => {
                    p.terms.insert(m.clone(), c.clone());
                }
                _ => {
                    let mut p = MultiPoly::zero(self.nvars);
                    p.terms.insert(m.clone(), c.clone());
                    out.push((d, p));
                }
            }
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            Some(d) => degrees.all(|e| e == d),
            None => true,
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, t: &BigRational) -> MultiPoly {
        if t.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * t)).collect(),
        }
    }

    /// Coefficients scaled to integers over their common denominator.
    fn integer_form(&self) -> (Vec<(&Monomial, BigInt)>, BigInt) {
        let den = lcm_of_denominators(self.terms.values());
        let numerators = self
            .terms
            .iter()
            .map(|(m, c)| (m, c.numer() * (&den / c.denom())))
            .collect();
        (numerators, den)
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        // multiply integer numerators, normalizing each rational only once at the end
        let (a, da) = self.integer_form();
        let (b, db) = other.integer_form();
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(a.len() * b.len() / 2 + 1);
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let prod = ca * cb;
                acc.entry(ma.times(mb))
                    .and_modify(|v| *v += &prod)
                    .or_insert(prod);
            }
        }
        let den = da * db;
        MultiPoly {
            nvars: self.nvars,
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, BigRational::new(c, den.clone())))
                .collect(),
        }
    }

    pub fn product<'a>(nvars: usize, factors: impl IntoIterator<Item = &'a MultiPoly>) -> MultiPoly {
        factors
            .into_iter()
            .fold(MultiPoly::one(nvars), |acc, f| acc.mul(f))
    }

    /// Value at a rational point, evaluated over a common denominator.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let Some(top) = self.total_degree() else {
            return BigRational::zero();
        };
        let q = lcm_of_denominators(point.iter());
        let scaled: Vec<BigInt> = point.iter().map(|x| x.numer() * (&q / x.denom())).collect();
        let max_exp: Vec<usize> = (0..self.nvars)
            .map(|v| self.terms.keys().map(|m| m.0[v] as usize).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<BigInt>> = scaled
            .iter()
            .zip(&max_exp)
            .map(|(a, &e)| {
                let mut p = vec![BigInt::one()];
                for k in 1..=e {
                    let next = &p[k - 1] * a;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut q_powers = vec![BigInt::one()];
        for k in 1..=top {
            let next = &q_powers[k - 1] * &q;
            q_powers.push(next);
        }
        let (numerators, den) = self.integer_form();
        let mut sum = BigInt::zero();
        for (m, c) in numerators {
            let mut term = c * &q_powers[top - m.degree()];
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term *= &powers[v][e as usize];
                }
            }
            sum += term;
        }
        BigRational::new(sum, den * &q_powers[top])
    }

    /// Canonical text, leading term first, e.g. `3/2*x_1_3^2*x_2_4 - x_1_2 + 1`.
    pub fn to_text(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag = c.abs();
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        names[v].clone()
                    } else {
                        format!("{}^{e}", names[v])
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}
