//! Certified truncation of the alternating sums for very long samples.
//!
//! The support is cut at the first `S` whose binomial moment `A(S + 1)` is
//! below its share of `epsilon` (Markov: `P(N >= j) <= E[C(N, j)] = A(j)`).
//! Each point mass is then summed until an explicit bound on the remaining
//! terms is below its share of the other half of `epsilon`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::combin::{binomial, multinomial};
use super::pmf::{ExactPmf, Precision, TruncationCertificate};
use super::{OccurrenceSpec, DEFAULT_TERM_BUDGET};
use crate::error::{Error, Result};
use crate::numeric::{rat_from_u64, rat_pow, uint_to_int};

/// `C(n - (m - 1) j, j) p^j`, zero once `j` copies no longer fit.
fn binomial_moment(n: u64, m: u64, p: &BigRational, j: u64) -> BigRational {
    match m.checked_mul(j) {
        Some(used) if used <= n => {
            BigRational::from_integer(uint_to_int(binomial(n - used + j, j))) * rat_pow(p, j)
        }
        _ => BigRational::zero(),
    }
}

/// Smallest `S` with `A(S + 1) <= share`.
fn support_cut(
    n: u64,
    m: u64,
    p: &BigRational,
    share: &BigRational,
    budget: u64,
) -> Result<(u64, BigRational)> {
    let mut s = 0u64;
    loop {
        let a = binomial_moment(n, m, p, s + 1);
        if &a <= share {
            return Ok((s, a));
        }
        s += 1;
        if s > budget {
            return Err(Error::BudgetExceeded(format!(
                "certified support exceeds {budget} points"
            )));
        }
    }
}

pub(crate) fn univariate(spec: &OccurrenceSpec, epsilon: &BigRational) -> Result<ExactPmf> {
    univariate_with_budget(spec, epsilon, DEFAULT_TERM_BUDGET)
}

pub(crate) fn univariate_with_budget(
    spec: &OccurrenceSpec,
    epsilon: &BigRational,
    budget: u64,
) -> Result<ExactPmf> {
    check_epsilon(epsilon)?;
    let n = spec.n();
    let m = spec.lengths()[0];
    let p = spec.probs().remove(0);
    let (a, b) = (p.numer().clone(), p.denom().clone());
    let k_max = n / m;
    let half = epsilon / BigRational::from_integer(2.into());
    let (s_max, tail) = support_cut(n, m, &p, &half, budget)?;
    let delta = &half / rat_from_u64(s_max + 1);
    let (dn, dd) = (delta.numer().clone(), delta.denom().clone());

    // lazily extended tables indexed by k
    let mut alloc: Vec<BigInt> = Vec::new();
    let mut a_pow: Vec<BigInt> = vec![BigInt::one()];
    let mut b_pow: Vec<BigInt> = vec![BigInt::one()];
    let extend =
        |k: usize, alloc: &mut Vec<BigInt>, a_pow: &mut Vec<BigInt>, b_pow: &mut Vec<BigInt>| {
            while alloc.len() <= k {
                let j = alloc.len() as u64;
                alloc.push(uint_to_int(binomial(n - (m - 1) * j, j)));
            }
            while a_pow.len() <= k {
                let next = a_pow.last().unwrap() * &a;
                a_pow.push(next);
                let next = b_pow.last().unwrap() * &b;
                b_pow.push(next);
            }
        };

    let mut masses = Vec::new();
    let mut terms = 0u64;
    let mut worst = BigRational::zero();
    let mut total_err = BigRational::zero();
    for s in 0..=s_max.min(k_max) {
        let mut acc = BigInt::zero();
        let mut choose = BigInt::one(); // C(k, s)
        let mut k = s;
        let bound = loop {
            extend(k as usize, &mut alloc, &mut a_pow, &mut b_pow);
            let mut t = &choose * &alloc[k as usize] * &a_pow[k as usize];
            if (k - s) % 2 == 1 {
                t = -t;
            }
            acc = acc * &b + &t;
            terms += 1;
            if terms > budget {
                return Err(Error::BudgetExceeded(format!(
                    "truncated evaluation passed {budget} terms"
                )));
            }
            if k == k_max {
                break BigRational::zero();
            }
            // |t_{k+1} / t_k| <= rho = (n - m k) p / (k + 1 - s), decreasing in k
            let rho_num = BigInt::from(n - m * k) * &a;
            let rho_den = &b * BigInt::from(k + 1 - s);
            if &rho_num * 2 <= rho_den {
                // tail <= |t_k| / b^k * rho / (1 - rho)
                let lhs = t.abs() * &rho_num * &dd;
                let gap = &rho_den - &rho_num;
                let rhs = &dn * &b_pow[k as usize] * &gap;
                if lhs <= rhs {
                    break BigRational::new(t.abs() * rho_num, &b_pow[k as usize] * gap);
                }
            }
            k += 1;
            choose = choose * BigInt::from(k) / BigInt::from(k - s);
        };
        let mut mass = BigRational::new(acc, b_pow[k as usize].clone());
        if mass.is_negative() {
            mass = BigRational::zero();
        }
        total_err += &bound;
        if bound > worst {
            worst = bound;
        }
        masses.push((vec![s], mass));
    }

    let cert = TruncationCertificate {
        epsilon: epsilon.clone(),
        point_error_bound: worst,
        total_error_bound: total_err,
        support_tail_bound: tail,
        terms,
    };
    Ok(ExactPmf::from_masses(1, masses, Precision::Truncated(cert)))
}

fn check_epsilon(epsilon: &BigRational) -> Result<()> {
    if !epsilon.is_positive() || epsilon >= &BigRational::one() {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok(())
}

/// `3^ceil(x)`, an upper bound for `e^x` when `x >= 0`.
fn exp_upper(x: &BigRational) -> BigRational {
    let c = x.ceil().to_integer().to_usize().unwrap_or(usize::MAX / 2);
    BigRational::from_integer(num_traits::pow(BigInt::from(3), c))
}

/// `sum_{e > r} x^e / e!`, bounded by the first omitted term over a
/// geometric ratio; `None` while `r + 2 <= x`.
fn poisson_tail_upper(x: &BigRational, r: u64) -> Option<BigRational> {
    let r2 = rat_from_u64(r + 2);
    if &r2 <= x {
        return None;
    }
    let mut first = BigRational::one();
    for i in 1..=r + 1 {
        first = first * x / rat_from_u64(i);
    }
    Some(first * &r2 / (&r2 - x))
}

pub(crate) fn multivariate(
    spec: &OccurrenceSpec,
    epsilon: &BigRational,
    budget: u64,
) -> Result<ExactPmf> {
    check_epsilon(epsilon)?;
    let n = spec.n();
    let lengths = spec.lengths();
    let probs = spec.probs();
    let l = lengths.len();
    let two_l = rat_from_u64(2 * l as u64);
    let share = epsilon / &two_l;

    let mut cuts = Vec::with_capacity(l);
    let mut tail = BigRational::zero();
    for i in 0..l {
        let (s, a) = support_cut(n, lengths[i], &probs[i], &share, budget)?;
        cuts.push(s);
        tail += a;
    }
    let box_points = support_box(&lengths, n, &cuts, budget)?;
    let points = box_points.len() as u64;
    let delta = epsilon / BigRational::from_integer(2.into()) / rat_from_u64(points.max(1));

    // |term| <= prod lambda_i^k_i / (s_i! (k_i - s_i)!), lambda_i = n P_i
    let lambdas: Vec<BigRational> = probs.iter().map(|p| p * rat_from_u64(n)).collect();
    let mut head = BigRational::one();
    for i in 0..l {
        let mut best = BigRational::one();
        let mut cur = BigRational::one();
        for s in 1..=cuts[i] {
            cur = cur * &lambdas[i] / rat_from_u64(s);
            if cur > best {
                best = cur.clone();
            }
        }
        head *= best;
    }
    let exps: Vec<BigRational> = lambdas.iter().map(exp_upper).collect();
    let mut r = 0u64;
    let excess_bound = loop {
        let mut total = Some(BigRational::zero());
        for i in 0..l {
            let others: BigRational = (0..l)
                .filter(|&j| j != i)
                .map(|j| exps[j].clone())
                .product();
            total = match (total, poisson_tail_upper(&lambdas[i], r)) {
                (Some(acc), Some(t)) => Some(acc + others * t),
                _ => None,
            };
        }
        if let Some(t) = total {
            let bound = &head * t;
            if bound <= delta {
                break bound;
            }
        }
        // every k beyond n / m_i contributes nothing
        if lengths.iter().all(|&m| r >= n / m) {
            break BigRational::zero();
        }
        r += 1;
        let work = (r as f64 + 1.0).powi(l as i32) * points as f64;
        if work > budget as f64 {
            return Err(Error::BudgetExceeded(format!(
                "truncated evaluation needs about {work:.3e} terms, over the budget of {budget}"
            )));
        }
    };

    let mut terms = 0u64;
    let mut masses = Vec::with_capacity(box_points.len());
    for s in box_points {
        let used: u64 = lengths.iter().zip(&s).map(|(m, s)| m * s).sum();
        let room: Vec<u64> = lengths.iter().map(|&m| ((n - used) / m).min(r)).collect();
        let top: Vec<u64> = s.iter().zip(&room).map(|(s, r)| s + r).collect();
        let mut acc = BigInt::zero();
        let mut e = vec![0u64; l];
        loop {
            let k: Vec<u64> = s.iter().zip(&e).map(|(s, e)| s + e).collect();
            let used_k: u64 = lengths.iter().zip(&k).map(|(m, k)| m * k).sum();
            if used_k <= n {
                let slots = n - used_k + k.iter().sum::<u64>();
                let parts: Vec<u64> = s.iter().chain(e.iter()).copied().collect();
                let mut t = uint_to_int(multinomial(slots, &parts));
                for i in 0..l {
                    t *= num_traits::pow(probs[i].numer().clone(), k[i] as usize);
                    t *= num_traits::pow(probs[i].denom().clone(), (top[i] - k[i]) as usize);
                }
                if e.iter().sum::<u64>() % 2 == 1 {
                    acc -= t;
                } else {
                    acc += t;
                }
                terms += 1;
            }
            if !advance(&mut e, &room) {
                break;
            }
        }
        let den: BigInt = (0..l)
            .map(|i| num_traits::pow(probs[i].denom().clone(), top[i] as usize))
            .product();
        let mut mass = BigRational::new(acc, den);
        if mass.is_negative() {
            mass = BigRational::zero();
        }
        masses.push((s, mass));
    }

    let cert = TruncationCertificate {
        epsilon: epsilon.clone(),
        point_error_bound: excess_bound.clone(),
        total_error_bound: excess_bound * rat_from_u64(points),
        support_tail_bound: tail,
        terms,
    };
    Ok(ExactPmf::from_masses(l, masses, Precision::Truncated(cert)))
}

/// Odometer over `0..=limits[i]` per coordinate; false once exhausted.
fn advance(e: &mut [u64], limits: &[u64]) -> bool {
    for i in (0..e.len()).rev() {
        if e[i] < limits[i] {
            e[i] += 1;
            return true;
        }
        e[i] = 0;
    }
    false
}

fn support_box(lengths: &[u64], n: u64, cuts: &[u64], budget: u64) -> Result<Vec<Vec<u64>>> {
    let count: f64 = cuts.iter().map(|&c| c as f64 + 1.0).product();
    if count > budget as f64 {
        return Err(Error::BudgetExceeded(format!(
            "certified support has about {count:.3e} points, over the budget of {budget}"
        )));
    }
    let mut out = Vec::new();
    let mut s = vec![0u64; cuts.len()];
    loop {
        if lengths.iter().zip(&s).map(|(m, s)| m * s).sum::<u64>() <= n {
            out.push(s.clone());
        }
        if !advance(&mut s, cuts) {
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{joint_pmf, DistOptions};
    use crate::model::IidModel;
    use crate::numeric::rat;
    use crate::words::{Alphabet, Sampling};

    fn spec(words: &[&str], n: u64) -> OccurrenceSpec {
        let b = Alphabet::binary();
        OccurrenceSpec::new(
            words.iter().map(|w| b.partial(w).unwrap()).collect(),
            n,
            IidModel::fair_coin(),
            Sampling::Sliding,
        )
        .unwrap()
    }

    fn within(truncated: &ExactPmf, exact: &ExactPmf) {
        let cert = truncated.certificate().unwrap().clone();
        assert!(truncated.verify_certificate());
        for (k, m) in exact.iter() {
            let diff = (truncated.mass(k) - m).abs();
            if truncated.mass(k).is_zero() && !truncated.iter().any(|(x, _)| x == k) {
                // outside the certified support
                assert!(m <= &cert.support_tail_bound);
            } else {
                assert!(diff <= cert.point_error_bound, "at {k:?}");
            }
        }
    }

    #[test]
    fn univariate_agrees_with_exact() {
        for (w, n) in [("10", 40), ("0011", 200), ("00111", 500), ("01", 2)] {
            let s = spec(&[w], n);
            let exact = joint_pmf(&s, &DistOptions::default()).unwrap();
            let tr = univariate(&s, &rat(1, 1_000_000_000)).unwrap();
            within(&tr, &exact);
        }
    }

    #[test]
    fn loose_epsilon_still_certified() {
        let s = spec(&["0011"], 300);
        let exact = joint_pmf(&s, &DistOptions::default()).unwrap();
        let tr = univariate(&s, &rat(1, 100)).unwrap();
        within(&tr, &exact);
        assert!(tr.len() < exact.len());
    }

    #[test]
    fn multivariate_agrees_with_exact() {
        let s = spec(&["00111", "00101"], 60);
        let exact = joint_pmf(&s, &DistOptions::default()).unwrap();
        let tr = multivariate(&s, &rat(1, 1_000_000), DEFAULT_TERM_BUDGET).unwrap();
        within(&tr, &exact);
    }

    #[test]
    fn rejects_bad_epsilon() {
        let s = spec(&["10"], 10);
        assert!(univariate(&s, &rat(0, 1)).is_err());
        assert!(univariate(&s, &rat(2, 1)).is_err());
    }
}
