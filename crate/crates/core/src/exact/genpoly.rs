use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Operations that can blow up take a `budget` on the number of stored
/// terms and fail with [`Error::BudgetExceeded`] past it.
#[derive(Clone, PartialEq, Eq)]
pub struct GenPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u64>, BigRational>,
}

impl GenPoly {
    pub fn zero(nvars: usize) -> Self {
        GenPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        GenPoly::from_terms(nvars, [(vec![0; nvars], c)])
    }

    pub fn one(nvars: usize) -> Self {
        GenPoly::constant(nvars, BigRational::one())
    }

    /// The variable `z_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        GenPoly::from_terms(nvars, [(e, BigRational::one())])
    }

    /// Sums coefficients of repeated exponents and drops zeros.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u64>, BigRational)>,
    ) -> Self {
        let mut p = GenPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u64>, c: BigRational) {
        assert_eq!(e.len(), self.nvars, "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u64]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u64>, &BigRational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Vec<u64>, BigRational> {
        self.terms
    }

    /// Largest exponent of each variable.
    pub fn degrees(&self) -> Vec<u64> {
        let mut d = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (d, &x) in d.iter_mut().zip(e) {
                *d = (*d).max(x);
            }
        }
        d
    }

    pub fn add(&self, other: &GenPoly) -> GenPoly {
        self.check_arity(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GenPoly) -> GenPoly {
        self.check_arity(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> GenPoly {
        GenPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, x)| (e.clone(), x * c)),
        )
    }

    pub fn mul(&self, other: &GenPoly, budget: usize) -> Result<GenPoly> {
        self.check_arity(other);
        if self.len().saturating_mul(other.len()) > budget.saturating_mul(64) {
            return Err(over_budget(self.len() * other.len(), budget));
        }
        let mut out = GenPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
            if out.len() > budget {
                return Err(over_budget(out.len(), budget));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u64, budget: usize) -> Result<GenPoly> {
        let mut result = GenPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, budget)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, budget)?;
            }
        }
        Ok(result)
    }

    /// Substitutes `z_i -> subs[i]`. The substitutes may live in a different
    /// number of variables than `self`.
    pub fn compose(&self, subs: &[GenPoly], budget: usize) -> Result<GenPoly> {
        if subs.len() != self.nvars {
            return Err(Error::InvalidArgument(format!(
                "{} substitutes for {} variables",
                subs.len(),
                self.nvars
            )));
        }
        let out_vars = subs.first().map_or(0, GenPoly::nvars);
        if subs.iter().any(|s| s.nvars != out_vars) {
            return Err(Error::InvalidArgument(
                "substitutes disagree on arity".into(),
            ));
        }
        let degrees = self.degrees();
        let mut powers: Vec<Vec<GenPoly>> = Vec::with_capacity(self.nvars);
        for (s, &d) in subs.iter().zip(&degrees) {
            let mut row = vec![GenPoly::one(out_vars)];
            for _ in 0..d {
                let next = row.last().unwrap().mul(s, budget)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = GenPoly::zero(out_vars);
        for (e, c) in &self.terms {
            let mut term = GenPoly::constant(out_vars, c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    term = term.mul(&powers[i][x as usize], budget)?;
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
            if out.len() > budget {
                return Err(over_budget(out.len(), budget));
            }
        }
        Ok(out)
    }

    /// `p(z_1 + c, ..., z_l + c)`.
    pub fn shift(&self, c: &BigRational, budget: usize) -> Result<GenPoly> {
        let subs: Vec<GenPoly> = (0..self.nvars)
            .map(|i| GenPoly::var(self.nvars, i).add(&GenPoly::constant(self.nvars, c.clone())))
            .collect();
        self.compose(&subs, budget)
    }

    fn check_arity(&self, other: &GenPoly) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials in different variable sets"
        );
    }
}

fn over_budget(terms: usize, budget: usize) -> Error {
    Error::BudgetExceeded(format!(
        "polynomial reached {terms} terms, over the budget of {budget}; use the automaton oracle"
    ))
}

impl fmt::Debug for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| {
                        if x == 1 {
                            format!("z{}", i + 1)
                        } else {
                            format!("z{}^{x}", i + 1)
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
