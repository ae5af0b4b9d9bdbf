//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::One;

use wordstat::exact::{
    allocation_weight, chain_pmf, joint_pmf, mean_variance, moment, poisson_pmf, DistOptions,
    GenPoly, DEFAULT_POLY_BUDGET,
};
use wordstat::numeric::{rat, rat_from_u64, rat_pow, to_f64};
use wordstat::oracles::{brute_force_joint_pmf, brute_force_law, StreamMode, DEFAULT_BRUTE_BUDGET};
use wordstat::rng::{BitExtraction, GeneratorKind, Mt19937};
use wordstat::stats::{
    blockwise_power, ks_pvalue, rng_audit, sliding_power, AuditConfig, PowerSpec,
};
use wordstat::words::{Alphabet, PartialWord, Sampling, Symbol};
use wordstat::{ExactPmf, IidModel, OccurrenceSpec};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn bin(s: &str) -> PartialWord {
    Alphabet::binary().partial(s).unwrap()
}

fn sliding(words: Vec<PartialWord>, n: u64, model: IidModel) -> OccurrenceSpec {
    OccurrenceSpec::new(words, n, model, Sampling::Sliding).unwrap()
}

/// Every nonoverlapping word over `q` letters with length in `1..=max_len`.
fn nonoverlapping_words(q: u8, max_len: usize) -> Vec<PartialWord> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let total = (q as usize).pow(len as u32);
        for code in 0..total {
            let mut c = code;
            let mut letters = vec![None; len];
            for l in letters.iter_mut().rev() {
                *l = Some((c % q as usize) as Symbol);
                c /= q as usize;
            }
            let w = PartialWord::new(letters).unwrap();
            if w.is_nonoverlapping() {
                out.push(w);
            }
        }
    }
    out
}

/// Seeded draw of a random nonoverlapping word over `q` letters.
fn random_word(rng: &mut Mt19937, q: u8, max_len: u32) -> PartialWord {
    loop {
        let len = 1 + rng.next_u32() % max_len;
        let letters = (0..len)
            .map(|_| Some((rng.next_u32() % u32::from(q)) as Symbol))
            .collect();
        let w = PartialWord::new(letters).unwrap();
        if w.is_nonoverlapping() {
            return w;
        }
    }
}

fn criterion_1() -> Outcome {
    let fair = IidModel::fair_coin();
    let words = nonoverlapping_words(2, 4);
    let mut cases = 0;
    for w in &words {
        for n in 1..=14 {
            let spec = sliding(vec![w.clone()], n, fair.clone());
            let exact = joint_pmf(&spec, &DistOptions::default()).map_err(|e| e.to_string())?;
            let brute =
                brute_force_joint_pmf(&spec, DEFAULT_BRUTE_BUDGET).map_err(|e| e.to_string())?;
            ensure!(exact == brute, "mismatch for {w} at n = {n}");
            cases += 1;
        }
    }
    for n in 1..=12 {
        let spec = sliding(vec![bin("00111"), bin("00101")], n, fair.clone());
        let exact = joint_pmf(&spec, &DistOptions::default()).map_err(|e| e.to_string())?;
        let brute =
            brute_force_joint_pmf(&spec, DEFAULT_BRUTE_BUDGET).map_err(|e| e.to_string())?;
        ensure!(exact == brute, "pair mismatch at n = {n}");
        cases += 1;
    }
    Ok(format!("{} words, {cases} exact comparisons", words.len()))
}

fn criterion_2() -> Outcome {
    let fair = IidModel::fair_coin();
    for n in 1..=30u64 {
        let law = joint_pmf(
            &sliding(vec![bin("01")], n, fair.clone()),
            &DistOptions::default(),
        )
        .map_err(|e| e.to_string())?;
        let avoiding = law.mass(&[0]) * rat_pow(&rat(2, 1), n);
        ensure!(
            avoiding == rat_from_u64(n + 1),
            "n = {n}: {avoiding} strings avoid 01"
        );
    }
    Ok("P(N = 0) 2^n = n + 1 for n = 1..30".into())
}

fn criterion_3() -> Outcome {
    let spec = PowerSpec::new(0.25, 500, 2).map_err(|e| e.to_string())?;
    let expected = [
        (0.2, 0.316007, 0.000295),
        (0.18, 0.860057, 0.002939),
        (0.16, 0.995681, 0.021481),
    ];
    let mut worst: f64 = 0.0;
    for (theta, s, b) in expected {
        let ps = sliding_power(&spec, theta).map_err(|e| e.to_string())?;
        let pb = blockwise_power(&spec, theta).map_err(|e| e.to_string())?;
        worst = worst.max((ps - s).abs()).max((pb - b).abs());
        ensure!((ps - s).abs() <= 1e-5, "sliding power at {theta}: {ps}");
        ensure!((pb - b).abs() <= 1e-5, "block-wise power at {theta}: {pb}");
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let p1 = ks_pvalue(0.001376, 200_000);
    let p2 = ks_pvalue(0.001409, 200_000);
    ensure!((p1 - 0.843306).abs() <= 5e-4, "p(0.001376) = {p1}");
    ensure!((p2 - 0.822066).abs() <= 5e-4, "p(0.001409) = {p2}");
    Ok(format!("p = {p1:.6}, {p2:.6}"))
}

fn criterion_5() -> Outcome {
    let audit = |generator, seed, word: &str, t| {
        rng_audit(&AuditConfig {
            generator,
            seed,
            extraction: BitExtraction::Lsb,
            stream: StreamMode::Continuous,
            word: bin(word),
            model: IidModel::fair_coin(),
            n: 1600,
            t,
        })
        .map_err(|e| e.to_string())
    };
    let bsd = audit(GeneratorKind::BsdRandom, 1, "11110", 400_000)?;
    ensure!(
        bsd.ks.p_value < 1e-10,
        "BSD not rejected: D = {}, p = {:e}",
        bsd.ks.d,
        bsd.ks.p_value
    );
    let mut detail = format!("BSD t=400000 D={:.6} p={:.2e}", bsd.ks.d, bsd.ks.p_value);
    for word in ["10", "11110"] {
        let mt = audit(GeneratorKind::Mt19937, 5489, word, 200_000)?;
        ensure!(
            mt.ks.p_value > 0.01,
            "MT rejected for {word}: D = {}, p = {}",
            mt.ks.d,
            mt.ks.p_value
        );
        detail.push_str(&format!(
            "; MT {word} t=200000 D={:.6} p={:.4}",
            mt.ks.d, mt.ks.p_value
        ));
    }
    Ok(detail)
}

fn criterion_6() -> Outcome {
    let dna = Alphabet::dna();
    let w = dna.partial("GATTACAGATTACC").map_err(|e| e.to_string())?;
    ensure!(w.is_nonoverlapping(), "test word overlaps itself");
    let n = 3_200_000_000u64;
    let model = IidModel::uniform(dna);
    let spec = OccurrenceSpec::single(w.clone(), n, model.clone()).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let law = joint_pmf(
        &spec,
        &DistOptions::truncated(rat(1, 1) / rat_pow(&rat(10, 1), 30)),
    )
    .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    let cert = law.certificate().ok_or("law is not truncated")?;
    ensure!(
        cert.epsilon <= rat(1, 1) / rat_pow(&rat(10, 1), 30),
        "epsilon {}",
        cert.epsilon
    );
    ensure!(law.verify_certificate(), "certificate does not verify");
    let (mean, _) = mean_variance(&w, n, &model).map_err(|e| e.to_string())?;
    let expected = rat_from_u64(n - 13) / rat_pow(&rat(4, 1), 14);
    ensure!(mean == expected, "mean {mean} differs from (n - 13) 4^-14");
    let lambda = to_f64(&expected);
    let dense = law.dense_f64().map_err(|e| e.to_string())?;
    let mut sup: f64 = 0.0;
    for k in 0..dense.len() + 20 {
        let exact = dense.get(k).copied().unwrap_or(0.0);
        sup = sup.max((exact - poisson_pmf(lambda, k as u64).map_err(|e| e.to_string())?).abs());
    }
    ensure!(sup < 1e-2, "Poisson sup-distance {sup}");
    Ok(format!(
        "{} support points in {:.2}s, lambda = {lambda:.4}, sup |pmf - Poisson| = {sup:.3e}",
        law.len(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = Mt19937::new(20_240_601);
    for case in 0..100 {
        let q = if case % 2 == 0 { 2 } else { 4 };
        let alphabet = if q == 2 {
            Alphabet::binary()
        } else {
            Alphabet::dna()
        };
        let model = IidModel::uniform(alphabet);
        let w = random_word(&mut rng, q, 6);
        let n = 1 + u64::from(rng.next_u32() % 100);
        let law = joint_pmf(
            &sliding(vec![w.clone()], n, model.clone()),
            &DistOptions::default(),
        )
        .map_err(|e| e.to_string())?;
        for t in 1..=4 {
            let closed = moment(&w, n, &model, t).map_err(|e| e.to_string())?;
            ensure!(
                closed == law.raw_moment(0, t),
                "case {case}: moment {t} of {w} at n = {n}"
            );
        }
        let (mean, var) = mean_variance(&w, n, &model).map_err(|e| e.to_string())?;
        let m1 = moment(&w, n, &model, 1).map_err(|e| e.to_string())?;
        let m2 = moment(&w, n, &model, 2).map_err(|e| e.to_string())?;
        ensure!(m1 == mean, "case {case}: mean");
        ensure!(&m2 - &m1 * &m1 == var, "case {case}: variance");
    }
    let (_, var) =
        mean_variance(&bin("11110"), 1600, &IidModel::fair_coin()).map_err(|e| e.to_string())?;
    ensure!(
        var == rat(358_671_875, 10_000_000),
        "variance of 11110 at n = 1600 is {var}"
    );
    Ok("100 random words, t = 1..4; 11110 at n = 1600 has variance 35.8671875".into())
}

fn criterion_8() -> Outcome {
    let fair = IidModel::fair_coin();
    let chain = vec![bin("011"), bin("0111"), bin("01111")];
    for n in 1..=14 {
        let spec = sliding(chain.clone(), n, fair.clone());
        let law = chain_pmf(&spec, DEFAULT_POLY_BUDGET).map_err(|e| e.to_string())?;
        let brute =
            brute_force_joint_pmf(&spec, DEFAULT_BRUTE_BUDGET).map_err(|e| e.to_string())?;
        ensure!(law == brute, "chain mismatch at n = {n}");
    }
    let mut rng = Mt19937::new(7);
    for case in 0..20 {
        let w = random_word(&mut rng, 2, 7);
        let n = 1 + u64::from(rng.next_u32() % 60);
        let spec = sliding(vec![w.clone()], n, fair.clone());
        let a = chain_pmf(&spec, DEFAULT_POLY_BUDGET).map_err(|e| e.to_string())?;
        let b = joint_pmf(&spec, &DistOptions::default()).map_err(|e| e.to_string())?;
        ensure!(a == b, "case {case}: {w} at n = {n}");
    }
    Ok("chain n = 1..14 and 20 single-word chains".into())
}

fn criterion_9() -> Outcome {
    let fair = IidModel::fair_coin();
    let w3 = PartialWord::family(3).map_err(|e| e.to_string())?;
    ensure!(
        Alphabet::binary().render_partial(&w3) == "0001??1??1",
        "w(3) renders differently"
    );
    for n in 1..=14 {
        let spec = sliding(vec![w3.clone()], n, fair.clone());
        let exact = joint_pmf(&spec, &DistOptions::default()).map_err(|e| e.to_string())?;
        let brute =
            brute_force_joint_pmf(&spec, DEFAULT_BRUTE_BUDGET).map_err(|e| e.to_string())?;
        ensure!(exact == brute, "w(3) mismatch at n = {n}");
    }
    let mut last_rate = f64::INFINITY;
    for m in 1..=6usize {
        let w = PartialWord::family(m).map_err(|e| e.to_string())?;
        ensure!(w.len() == m * m + 1, "|w({m})| = {}", w.len());
        ensure!(
            fair.prob(&w) == rat(1, 1) / rat_pow(&rat(2, 1), 2 * m as u64),
            "P(w({m}))"
        );
        ensure!(w.is_nonoverlapping(), "w({m}) overlaps itself");
        let rate = (2 * m) as f64 / (m * m + 1) as f64;
        if m >= 2 {
            ensure!(rate < last_rate, "rate not decreasing at m = {m}");
        }
        last_rate = rate;
    }
    Ok("w(3) n = 1..14; family m = 1..6".into())
}

/// `F_A(z) = sum_k A(k) z^k` from allocation weights.
fn f_a(lengths: &[u64], probs: &[BigRational], n: u64) -> GenPoly {
    let l = lengths.len();
    let mut terms = Vec::new();
    let mut k = vec![0u64; l];
    loop {
        let used: u64 = k.iter().zip(lengths).map(|(a, b)| a * b).sum();
        if used <= n {
            let mut c = BigRational::from_integer(allocation_weight(n, lengths, &k).into());
            for (p, &ki) in probs.iter().zip(&k) {
                c *= rat_pow(p, ki);
            }
            terms.push((k.clone(), c));
        }
        let mut i = l;
        loop {
            if i == 0 {
                return GenPoly::from_terms(l, terms);
            }
            i -= 1;
            if k[i] * lengths[i] < n {
                k[i] += 1;
                break;
            }
            k[i] = 0;
        }
    }
}

fn pmf_poly(law: &ExactPmf) -> GenPoly {
    GenPoly::from_terms(law.arity(), law.iter().map(|(k, m)| (k.clone(), m.clone())))
}

fn criterion_10() -> Outcome {
    let fair = IidModel::fair_coin();
    let one = rat(1, 1);
    let mut checked = 0;
    let sets: Vec<Vec<PartialWord>> = nonoverlapping_words(2, 4)
        .into_iter()
        .map(|w| vec![w])
        .chain([
            vec![bin("00111"), bin("00101")],
            vec![PartialWord::family(2).unwrap()],
        ])
        .collect();
    for words in &sets {
        for n in 1..=12 {
            let spec = sliding(words.clone(), n, fair.clone());
            let fb = pmf_poly(
                &brute_force_joint_pmf(&spec, DEFAULT_BRUTE_BUDGET).map_err(|e| e.to_string())?,
            );
            let shifted = fb
                .shift(&one, DEFAULT_POLY_BUDGET)
                .map_err(|e| e.to_string())?;
            ensure!(
                shifted == f_a(&spec.lengths(), &spec.probs(), n),
                "F_A != F_B(z+1) for {words:?}, n = {n}"
            );
            checked += 1;
        }
    }
    // chain: F_A(z) = F_B(z_1 + 1, z_1 + z_2 + 1, ...) with F_B the law of the
    // exclusive counts (longest chain word matching at each position)
    let chain = vec![bin("011"), bin("0111"), bin("01111")];
    let l = chain.len();
    let subs: Vec<GenPoly> = (0..l)
        .map(|i| (0..=i).fold(GenPoly::one(l), |acc, j| acc.add(&GenPoly::var(l, j))))
        .collect();
    for n in 1..=12 {
        let cw = chain.clone();
        let exclusive = brute_force_law(&fair, n, l, DEFAULT_BRUTE_BUDGET, |x| {
            let mut e = vec![0u64; l];
            for p in 0..x.len() {
                if let Some(j) = (0..l)
                    .rev()
                    .find(|&j| p + cw[j].len() <= x.len() && cw[j].matches_at(x, p))
                {
                    e[j] += 1;
                }
            }
            e
        })
        .map_err(|e| e.to_string())?;
        let composed = pmf_poly(&exclusive)
            .compose(&subs, DEFAULT_POLY_BUDGET)
            .map_err(|e| e.to_string())?;
        let spec = sliding(chain.clone(), n, fair.clone());
        ensure!(
            composed == f_a(&spec.lengths(), &spec.probs(), n),
            "chain substitution fails at n = {n}"
        );
        ensure!(
            !composed.is_zero() && composed.coeff(&vec![0; l]) == BigRational::one(),
            "F_A(0) != 1"
        );
        checked += 1;
    }
    Ok(format!("{checked} coefficient-wise identities"))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "oracle equivalence", criterion_1),
        (2, "avoidance count", criterion_2),
        (3, "power table", criterion_3),
        (4, "KS p-values", criterion_4),
        (5, "generator audit", criterion_5),
        (6, "DNA scale", criterion_6),
        (7, "moments", criterion_7),
        (8, "prefix chains", criterion_8),
        (9, "partial words", criterion_9),
        (10, "generating-function identities", criterion_10),
    ];
    let limits = [
        300.0, 10.0, 1.0, 1.0, 600.0, 10.0, 300.0, 300.0, 300.0, 300.0,
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for ((id, name, run), limit) in criteria.into_iter().zip(limits) {
        let start = Instant::now();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(run)) {
            Ok(o) => o,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(d) if secs > limit => Err(format!("{d}; over the {limit}s limit")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{secs:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {why} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
