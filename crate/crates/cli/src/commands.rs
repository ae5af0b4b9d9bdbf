use std::fs::File;
use std::io::Write;

use num_rational::BigRational;
use serde_json::{json, Value};
use wordstat::exact::{
    chain_pmf, check_chain, joint_pmf, mean_variance, moment, DistOptions, DEFAULT_POLY_BUDGET,
};
use wordstat::numeric::{parse_rational, rat_from_u64, rat_pow, to_decimal_string};
use wordstat::oracles::{
    automaton_dp_pmf, brute_force_joint_pmf, monte_carlo_from_source, monte_carlo_pmf,
    sample_exact, DpOptions, EmpiricalPmf, MonteCarloConfig, RunMetadata, StreamMode,
    DEFAULT_BRUTE_BUDGET,
};
use wordstat::rng::{
    read_bits, write_bits, BitExtraction, BitFormat, BitSource, BufferSource, ExactSampler,
    GeneratorKind, GeneratorState, LetterSource, SymbolSource,
};
use wordstat::stats::{ks_pvalue, ks_statistic, power_curve, rng_audit, AuditConfig, PowerSpec};
use wordstat::words::{
    is_partial_set_nonoverlapping, is_prefix_chain, partial_pair_overlapping, Alphabet,
    PartialWord, Sampling,
};
use wordstat::{ExactPmf, IidModel, OccurrenceSpec};

use crate::config::{build_model, parse_words, RunConfig};
use crate::output::{write_atomic, Sink};
use crate::{
    CliError, Command, FormatArg, Method, Mode, ModelArgs, OutputArgs, SamplingArg, StreamArg,
};

pub fn dispatch(command: Command, args: Vec<String>) -> Result<(), CliError> {
    let name = args.first().cloned().unwrap_or_default();
    let mut cfg = RunConfig::new(&name, args);
    match command {
        Command::Dist {
            model,
            words,
            n,
            mode,
            epsilon,
            method,
            sampling,
            budget,
            output,
        } => dist(
            &mut cfg, &model, &words, n, mode, &epsilon, method, sampling, budget, &output,
        ),
        Command::Moments {
            model,
            word,
            n,
            order,
            output,
        } => moments(&mut cfg, &model, &word, n, order, &output),
        Command::Power {
            theta_star,
            wlen,
            n,
            grid,
            sigma,
            output,
        } => power(&mut cfg, theta_star, wlen, n, grid, sigma, &output),
        Command::Kstest {
            model,
            word,
            n,
            t,
            bits,
            format,
            generator,
            seed,
            extraction,
            stream,
            output,
        } => {
            let source = match bits {
                Some(path) => Source::Bits(path, format),
                None => Source::Generator {
                    name: generator.unwrap_or_else(|| "mt19937".into()),
                    seed,
                    extraction,
                    stream,
                },
            };
            kstest(&mut cfg, &model, &word, n, t, source, &output)
        }
        Command::Audit {
            model,
            word,
            n,
            t,
            generator,
            seed,
            extraction,
            stream,
            output,
        } => audit(
            &mut cfg,
            &model,
            &word,
            n,
            t,
            &generator,
            seed,
            &extraction,
            stream,
            &output,
        ),
        Command::Overlap {
            alphabet,
            words,
            output,
        } => overlap(&mut cfg, &alphabet, &words, &output),
        Command::Partial {
            model,
            family,
            words,
            max_wildcards,
            output,
        } => partial(&mut cfg, &model, family, &words, max_wildcards, &output),
        Command::Simulate {
            model,
            generator,
            seed,
            extraction,
            length,
            format,
            word,
            n,
            t,
            output,
        } => simulate(
            &mut cfg,
            &model,
            &generator,
            seed,
            &extraction,
            length,
            format,
            word.as_deref(),
            n,
            t,
            &output,
        ),
        Command::Rerun { .. } => unreachable!("handled before dispatch"),
    }
}

fn render(r: &BigRational, o: &OutputArgs) -> Value {
    if o.fractions {
        json!({ "decimal": to_decimal_string(r, o.digits), "exact": r.to_string() })
    } else {
        Value::String(to_decimal_string(r, o.digits))
    }
}

fn model_from(cfg: &mut RunConfig, m: &ModelArgs) -> Result<IidModel, CliError> {
    let model = build_model(&m.alphabet, m.probs.as_deref())?;
    cfg.record_model(&model);
    Ok(model)
}

fn stream_mode(s: StreamArg) -> StreamMode {
    match s {
        StreamArg::Continuous => StreamMode::Continuous,
        StreamArg::Reseed => StreamMode::Reseed,
    }
}

fn bit_format(f: FormatArg) -> BitFormat {
    match f {
        FormatArg::Ascii => BitFormat::Ascii,
        FormatArg::Packed => BitFormat::Packed,
    }
}

/// Seed 1 for the BSD and Lehmer generators, 5489 for MT and the sampler.
fn default_seed(kind: GeneratorKind) -> u32 {
    match kind {
        GeneratorKind::Mt19937 | GeneratorKind::ExactSampler => 5489,
        GeneratorKind::BsdRandom | GeneratorKind::LcgMinstd => 1,
    }
}

fn announce(sink: &Sink, lines: &[String]) {
    if sink.to_files() {
        for l in lines {
            println!("{l}");
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn dist(
    cfg: &mut RunConfig,
    m: &ModelArgs,
    words: &[String],
    n: u64,
    mode: Mode,
    epsilon: &str,
    method: Method,
    sampling: SamplingArg,
    budget: Option<u64>,
    o: &OutputArgs,
) -> Result<(), CliError> {
    let model = model_from(cfg, m)?;
    let pws = parse_words(&model, words)?;
    let sampling = match sampling {
        SamplingArg::Sliding => Sampling::Sliding,
        SamplingArg::Blockwise => Sampling::Blockwise,
    };
    cfg.words = words.to_vec();
    cfg.n = Some(n);
    cfg.mode = Some(format!("{mode:?}").to_lowercase());
    cfg.set("method", format!("{method:?}").to_lowercase());
    cfg.set("sampling", sampling);
    if mode == Mode::Truncated {
        cfg.epsilon = Some(epsilon.to_string());
    }
    if let Some(b) = budget {
        cfg.set("budget", b);
    }
    let sink = Sink::new(o.out.clone());
    cfg.outputs = sink.planned(&["json", "csv"]);

    let spec = OccurrenceSpec::new(pws.clone(), n, model.clone(), sampling)?;
    if mode == Mode::Truncated && method != Method::Formula {
        return Err(CliError::new(
            "invalid_argument",
            "truncated mode is only available with --method formula",
        ));
    }
    if sampling == Sampling::Blockwise && matches!(method, Method::Chain | Method::Automaton) {
        return Err(CliError::new(
            "invalid_argument",
            "block-wise counts use --method formula or brute",
        ));
    }
    let law = match method {
        Method::Formula => {
            let mut opts = match mode {
                Mode::Exact => DistOptions::default(),
                Mode::Truncated => DistOptions::truncated(parse_rational(epsilon)?),
            };
            if let Some(b) = budget {
                opts.term_budget = b;
            }
            joint_pmf(&spec, &opts)?
        }
        Method::Chain => chain_pmf(&spec, budget.map_or(DEFAULT_POLY_BUDGET, |b| b as usize))?,
        Method::Automaton => automaton_dp_pmf(&spec, &DpOptions::default())?,
        Method::Brute => brute_force_joint_pmf(&spec, budget.unwrap_or(DEFAULT_BRUTE_BUDGET))?,
    };

    let mut summary = Vec::new();
    let mut lines = Vec::new();
    for (i, (w, pw)) in words.iter().zip(&pws).enumerate() {
        let (mean, variance) = if law.is_exact() {
            (law.mean(i), law.variance(i))
        } else {
            // truncated laws come from the formula, so each word is nonoverlapping
            mean_variance(pw, n, &model)?
        };
        lines.push(format!(
            "{w}: mean {} variance {}",
            to_decimal_string(&mean, 20),
            to_decimal_string(&variance, 20)
        ));
        summary
            .push(json!({ "word": w, "mean": render(&mean, o), "variance": render(&variance, o) }));
    }
    let mut csv = Vec::new();
    law.write_csv(&mut csv, o.digits)?;
    let result = json!({
        "words": words,
        "n": n,
        "sampling": sampling,
        "verified": law.verify_certificate(),
        "summary": summary,
        "pmf": law.to_report(o.digits, o.fractions),
    });
    sink.emit(cfg, &result, Some(csv))?;
    lines.extend(cfg.outputs.iter().map(|p| format!("wrote {p}")));
    announce(&sink, &lines);
    Ok(())
}

fn moments(
    cfg: &mut RunConfig,
    m: &ModelArgs,
    word: &str,
    n: u64,
    order: u32,
    o: &OutputArgs,
) -> Result<(), CliError> {
    let model = model_from(cfg, m)?;
    let pw = model.alphabet().partial(word)?;
    cfg.words = vec![word.into()];
    cfg.n = Some(n);
    cfg.set("order", order);
    let sink = Sink::new(o.out.clone());
    cfg.outputs = sink.planned(&["json", "csv"]);

    let mut rows = Vec::new();
    let mut csv = String::from("t,moment\n");
    let mut lines = Vec::new();
    for t in 1..=order {
        let value = moment(&pw, n, &model, t)?;
        csv.push_str(&format!("{t},{}\n", to_decimal_string(&value, o.digits)));
        lines.push(format!("E[N^{t}] = {}", to_decimal_string(&value, 20)));
        rows.push(json!({ "t": t, "value": render(&value, o) }));
    }
    let (mean, variance) = mean_variance(&pw, n, &model)?;
    let result = json!({
        "word": word,
        "n": n,
        "moments": rows,
        "mean": render(&mean, o),
        "variance": render(&variance, o),
    });
    sink.emit(cfg, &result, Some(csv.into_bytes()))?;
    lines.extend(cfg.outputs.iter().map(|p| format!("wrote {p}")));
    announce(&sink, &lines);
    Ok(())
}

fn power(
    cfg: &mut RunConfig,
    theta_star: f64,
    wlen: u64,
    n: u64,
    grid: Option<Vec<f64>>,
    sigma: f64,
    o: &OutputArgs,
) -> Result<(), CliError> {
    cfg.n = Some(n);
    cfg.set("theta_star", theta_star);
    cfg.set("wlen", wlen);
    cfg.set("sigma", sigma);
    let grid = grid.unwrap_or_else(|| {
        (1..=100)
            .map(|i| theta_star * f64::from(i) / 100.0)
            .collect()
    });
    cfg.set("grid", &grid);
    let sink = Sink::new(o.out.clone());
    cfg.outputs = sink.planned(&["json", "csv"]);

    let spec = PowerSpec::new(theta_star, n, wlen)?.with_sigma(sigma);
    let curve = power_curve(&spec, &grid)?;
    let mut csv = Vec::new();
    curve.write_csv(&mut csv)?;
    sink.emit(cfg, &curve, Some(csv))?;
    let mut lines: Vec<String> = curve
        .points
        .iter()
        .take(10)
        .map(|p| {
            format!(
                "theta {:.6}: sliding {:.6} block-wise {:.6}",
                p.theta, p.power_sliding, p.power_blockwise
            )
        })
        .collect();
    lines.extend(cfg.outputs.iter().map(|p| format!("wrote {p}")));
    announce(&sink, &lines);
    Ok(())
}

enum Source {
    Bits(std::path::PathBuf, FormatArg),
    Generator {
        name: String,
        seed: Option<u32>,
        extraction: String,
        stream: StreamArg,
    },
}

fn kstest(
    cfg: &mut RunConfig,
    m: &ModelArgs,
    word: &str,
    n: u64,
    t: Option<u64>,
    source: Source,
    o: &OutputArgs,
) -> Result<(), CliError> {
    let model = model_from(cfg, m)?;
    let pw = model.alphabet().partial(word)?;
    cfg.words = vec![word.into()];
    cfg.n = Some(n);
    let sink = Sink::new(o.out.clone());
    cfg.outputs = sink.planned(&["json"]);
    let spec = OccurrenceSpec::single(pw, n, model.clone())?;
    let law = joint_pmf(&spec, &DistOptions::default())?;

    let (emp, origin): (EmpiricalPmf, Value) = match source {
        Source::Bits(path, format) => {
            if model.alphabet().size() != 2 {
                return Err(CliError::new(
                    "invalid_argument",
                    "bit files need a two-letter alphabet",
                ));
            }
            cfg.set("bits", path.display().to_string());
            cfg.set("format", format!("{format:?}").to_lowercase());
            let bits = read_bits(File::open(&path)?, bit_format(format))?;
            let available = (bits.len() as u64).checked_div(n).unwrap_or(0);
            let t = t.unwrap_or(available);
            cfg.t = Some(t);
            if t == 0 {
                return Err(CliError::new(
                    "empty_sample",
                    format!("{} bits hold no sample of length {n}", bits.len()),
                ));
            }
            let emp = monte_carlo_from_source(&spec, &mut BufferSource::new(bits), t)?;
            (emp, json!({ "bits": path.display().to_string(), "t": t }))
        }
        Source::Generator {
            name,
            seed,
            extraction,
            stream,
        } => {
            let kind = GeneratorKind::parse(&name)?;
            let seed = seed.unwrap_or_else(|| default_seed(kind));
            let extraction = BitExtraction::parse(&extraction)?;
            let t = t.ok_or_else(|| {
                CliError::new("invalid_argument", "-t is required with a generator")
            })?;
            cfg.generator = Some(kind.name().into());
            cfg.seed = Some(seed);
            cfg.extraction = Some(extraction.name().into());
            cfg.t = Some(t);
            cfg.set("stream", stream_mode(stream));
            let (emp, meta): (EmpiricalPmf, RunMetadata) = if kind == GeneratorKind::ExactSampler {
                sample_exact(&law, seed, t)?
            } else {
                monte_carlo_pmf(
                    &spec,
                    &MonteCarloConfig {
                        generator: kind,
                        seed,
                        extraction,
                        iterations: t,
                        stream: stream_mode(stream),
                    },
                )?
            };
            (emp, serde_json::to_value(meta)?)
        }
    };
    let d = ks_statistic(&emp.cdf(0)?, &law)?;
    let d_f64 = wordstat::numeric::to_f64(&d);
    let p = ks_pvalue(d_f64, emp.samples());
    let result = json!({
        "word": word,
        "n": n,
        "source": origin,
        "t": emp.samples(),
        "d": d_f64,
        "d_exact": render(&d, o),
        "p_value": p,
    });
    sink.emit(cfg, &result, None)?;
    let mut lines = vec![format!(
        "D = {d_f64:.6}, p = {p:.6e}, t = {}",
        emp.samples()
    )];
    lines.extend(cfg.outputs.iter().map(|p| format!("wrote {p}")));
    announce(&sink, &lines);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn audit(
    cfg: &mut RunConfig,
    m: &ModelArgs,
    word: &str,
    n: u64,
    t: u64,
    generator: &str,
    seed: Option<u32>,
    extraction: &str,
    stream: StreamArg,
    o: &OutputArgs,
) -> Result<(), CliError> {
    let model = model_from(cfg, m)?;
    let pw = model.alphabet().partial(word)?;
    let kind = GeneratorKind::parse(generator)?;
    let seed = seed.unwrap_or_else(|| default_seed(kind));
    let extraction = BitExtraction::parse(extraction)?;
    cfg.words = vec![word.into()];
    cfg.n = Some(n);
    cfg.t = Some(t);
    cfg.generator = Some(kind.name().into());
    cfg.seed = Some(seed);
    cfg.extraction = Some(extraction.name().into());
    cfg.set("stream", stream_mode(stream));
    let sink = Sink::new(o.out.clone());
    cfg.outputs = sink.planned(&["json", "csv"]);

    let report = rng_audit(&AuditConfig {
        generator: kind,
        seed,
        extraction,
        stream: stream_mode(stream),
        word: pw,
        model,
        n,
        t,
    })?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    sink.emit(cfg, &report, Some(csv))?;
    let mut lines = vec![format!(
        "{} on {word}: D = {:.6}, p = {:.6e}, t = {t}",
        kind.name(),
        report.ks.d,
        report.ks.p_value
    )];
    lines.extend(cfg.outputs.iter().map(|p| format!("wrote {p}")));
    announce(&sink, &lines);
    Ok(())
}

fn overlap(
    cfg: &mut RunConfig,
    alphabet: &str,
    words: &[String],
    o: &OutputArgs,
) -> Result<(), CliError> {
    let alphabet = Alphabet::parse(alphabet)?;
    cfg.alphabet = Some(alphabet.symbols().iter().collect());
    cfg.words = words.to_vec();
    let sink = Sink::new(o.out.clone());
    cfg.outputs = sink.planned(&["json"]);
    let pws: Vec<PartialWord> = words
        .iter()
        .map(|w| alphabet.partial(w))
        .collect::<Result<_, _>>()?;

    let each: Vec<Value> = words
        .iter()
        .zip(&pws)
        .map(|(w, pw)| {
            json!({
                "word": w,
                "length": pw.len(),
                "wildcards": pw.wildcard_count(),
                "nonoverlapping": pw.is_nonoverlapping(),
                "longest_border": pw.as_word().map(|x| x.longest_border()),
            })
        })
        .collect();
    let mut pairs = Vec::new();
    for i in 0..pws.len() {
        for j in i + 1..pws.len() {
            pairs.push(json!({
                "x": words[i],
                "y": words[j],
                "overlapping": partial_pair_overlapping(&pws[i], &pws[j]),
            }));
        }
    }
    let set_ok = is_partial_set_nonoverlapping(&pws);
    let chain = check_chain(&pws);
    let result = json!({
        "words": each,
        "pairs": pairs,
        "set_nonoverlapping": set_ok,
        "prefix_chain": is_prefix_chain(&pws),
        "chain_law_applicable": chain.is_ok(),
        "chain_obstacle": chain.err().map(|e| e.to_string()),
    });
    sink.emit(cfg, &result, None)?;
    let mut lines = vec![format!("set nonoverlapping: {set_ok}")];
    lines.extend(cfg.outputs.iter().map(|p| format!("wrote {p}")));
    announce(&sink, &lines);
    Ok(())
}

fn partial(
    cfg: &mut RunConfig,
    m: &ModelArgs,
    family: Option<usize>,
    words: &[String],
    max_wildcards: usize,
    o: &OutputArgs,
) -> Result<(), CliError> {
    let model = model_from(cfg, m)?;
    let alphabet = model.alphabet().clone();
    let sink = Sink::new(o.out.clone());
    cfg.outputs = sink.planned(&["json"]);
    cfg.set("max_wildcards", max_wildcards);
    let mut pws = Vec::new();
    if let Some(k) = family {
        cfg.set("family", k);
        pws.push(PartialWord::family(k)?);
        alphabet.check_partial(&pws[0])?;
    }
    for w in words {
        pws.push(alphabet.partial(w)?);
    }
    cfg.words = words.to_vec();

    let q = rat_from_u64(alphabet.size() as u64);
    let entries: Vec<Value> = pws
        .iter()
        .map(|pw| -> Result<Value, CliError> {
            let realizations = if pw.wildcard_count() <= max_wildcards {
                let list = pw.realizations(&alphabet, max_wildcards)?;
                Some(
                    list.iter()
                        .map(|r| alphabet.render(r.letters()))
                        .collect::<Vec<_>>(),
                )
            } else {
                None
            };
            Ok(json!({
                "word": alphabet.render_partial(pw),
                "length": pw.len(),
                "wildcards": pw.wildcard_count(),
                "fixed_letters": pw.len() - pw.wildcard_count(),
                "tilde": alphabet.render(pw.tilde().letters()),
                "probability": render(&model.prob(pw), o),
                "nonoverlapping": pw.is_nonoverlapping(),
                "realization_count": rat_pow(&q, pw.wildcard_count() as u64).to_string(),
                "realizations": realizations,
            }))
        })
        .collect::<Result<_, _>>()?;
    let mut result = json!({ "partial_words": entries });
    if let Some(k) = family {
        let k = k as u64;
        let rate = BigRational::new((2 * k).into(), (k * k + 1).into());
        result["family"] = json!({ "m": k, "rate": render(&rate, o) });
    }
    sink.emit(cfg, &result, None)?;
    let mut lines: Vec<String> = pws
        .iter()
        .map(|pw| format!("{} (length {})", alphabet.render_partial(pw), pw.len()))
        .collect();
    lines.extend(cfg.outputs.iter().map(|p| format!("wrote {p}")));
    announce(&sink, &lines);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    cfg: &mut RunConfig,
    m: &ModelArgs,
    generator: &str,
    seed: Option<u32>,
    extraction: &str,
    length: Option<u64>,
    format: FormatArg,
    word: Option<&str>,
    n: Option<u64>,
    t: Option<u64>,
    o: &OutputArgs,
) -> Result<(), CliError> {
    let model = model_from(cfg, m)?;
    let kind = GeneratorKind::parse(generator)?;
    let seed = seed.unwrap_or_else(|| default_seed(kind));
    cfg.generator = Some(kind.name().into());
    cfg.seed = Some(seed);

    if kind == GeneratorKind::ExactSampler {
        let (Some(word), Some(n), Some(t)) = (word, n, t) else {
            return Err(CliError::new(
                "invalid_argument",
                "the exact sampler needs -w, -n and -t",
            ));
        };
        cfg.words = vec![word.into()];
        cfg.n = Some(n);
        cfg.t = Some(t);
        let sink = Sink::new(o.out.clone());
        cfg.outputs = sink.planned(&["json", "csv"]);
        let spec = OccurrenceSpec::single(model.alphabet().partial(word)?, n, model)?;
        let law: ExactPmf = joint_pmf(&spec, &DistOptions::default())?;
        let mut sampler = ExactSampler::new(&law, seed)?;
        let samples: Vec<u64> = (0..t).map(|_| sampler.sample()[0]).collect();
        let mut csv = String::from("sample,count\n");
        for (i, s) in samples.iter().enumerate() {
            csv.push_str(&format!("{i},{s}\n"));
        }
        sink.emit(
            cfg,
            &json!({ "word": word, "n": n, "samples": samples }),
            Some(csv.into_bytes()),
        )?;
        announce(
            &sink,
            &cfg.outputs
                .iter()
                .map(|p| format!("wrote {p}"))
                .collect::<Vec<_>>(),
        );
        return Ok(());
    }

    let length = length.ok_or_else(|| CliError::new("invalid_argument", "--length is required"))?;
    let extraction = BitExtraction::parse(extraction)?;
    cfg.set("length", length);
    cfg.set("format", format!("{format:?}").to_lowercase());
    let state = GeneratorState::new(kind, seed)?;
    let binary = model.alphabet().size() == 2 && model.is_uniform();
    let mut source: Box<dyn SymbolSource> = if binary {
        cfg.extraction = Some(extraction.name().into());
        Box::new(BitSource::new(state, extraction))
    } else {
        Box::new(LetterSource::new(state, &model))
    };
    let mut symbols = vec![0u8; length as usize];
    source.fill(&mut symbols)?;

    let mut payload = Vec::new();
    match format {
        FormatArg::Packed if model.alphabet().size() != 2 => {
            return Err(CliError::new(
                "invalid_argument",
                "packed output needs a two-letter alphabet",
            ));
        }
        FormatArg::Packed => write_bits(&mut payload, &symbols, BitFormat::Packed)?,
        FormatArg::Ascii => {
            payload.extend(symbols.iter().map(|&s| model.alphabet().symbol(s) as u8));
            payload.push(b'\n');
        }
    }
    let stream_ext = if format == FormatArg::Packed {
        "bin"
    } else {
        "txt"
    };
    let sink = Sink::new(o.out.clone());
    if !sink.to_files() {
        if format == FormatArg::Packed {
            return Err(CliError::new(
                "invalid_argument",
                "packed output needs --out",
            ));
        }
        std::io::stdout().lock().write_all(&payload)?;
        return Ok(());
    }
    cfg.outputs = sink.planned(&[stream_ext, "json"]);
    // the stream itself cannot carry a header; the JSON sidecar records the run
    write_atomic(&sink.path(stream_ext).unwrap(), &payload)?;
    let ones = symbols.iter().filter(|&&s| s == 1).count();
    sink.emit(
        cfg,
        &json!({ "length": length, "ones": ones, "stream": cfg.outputs[0] }),
        None,
    )?;
    announce(
        &sink,
        &cfg.outputs
            .iter()
            .map(|p| format!("wrote {p}"))
            .collect::<Vec<_>>(),
    );
    Ok(())
}
