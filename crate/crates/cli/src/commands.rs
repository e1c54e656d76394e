use std::time::Instant;

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde_json::{json, Map, Value};

use dickson_core::congruence::{solve_chain, Congruence};
use dickson_core::criteria::{is_perm_brute, is_perm_v, is_perm_w, profile};
use dickson_core::dickson::{eval_fast, eval_recurrence, DicksonParams};
use dickson_core::group::{
    enumerate_kernel, group_order, group_order_auto, group_order_closed, group_order_closed_pe,
    group_order_oracle_report, GroupOrderReport,
};
use dickson_core::numth::{factorize, is_prime, Factorization};
use dickson_core::oracle::summarize_all;
use dickson_core::{Error, Execution};

use crate::output::{num, nums, Output};

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) | Error::DegreeTooLarge { .. } => 2,
            Error::Overflow(_) => 4,
            Error::CapExceeded { .. } => 5,
            Error::NotInA | Error::Internal(_) => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult = Result<Output, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Evaluator {
    Fast,
    Recurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OrderMethodArg {
    Auto,
    Closed,
    Enum,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PermMethodArg {
    All,
    W,
    V,
    Brute,
}

fn modulus(n: u64) -> Result<Factorization, CliError> {
    if n == 0 {
        return Err(CliError::usage("n must be at least 1"));
    }
    Ok(factorize(n)?)
}

fn at_least_two(n: u64) -> Result<Factorization, CliError> {
    if n < 2 {
        return Err(CliError::usage("n must be at least 2"));
    }
    modulus(n)
}

pub fn eval(k: u64, a: i64, n: u64, u: u64, evaluator: Evaluator, check: bool) -> CliResult {
    let p = DicksonParams::new(k, a, n).map_err(|_| CliError::usage("n must be at least 1"))?;
    let value = match evaluator {
        Evaluator::Fast => eval_fast(&p, u),
        Evaluator::Recurrence => eval_recurrence(&p, u),
    };
    if check {
        let other = match evaluator {
            Evaluator::Fast => eval_recurrence(&p, u),
            Evaluator::Recurrence => eval_fast(&p, u),
        };
        if other != value {
            return Err(CliError {
                code: 3,
                message: format!("evaluators disagree: {value} vs {other}"),
            });
        }
    }
    let method = match (evaluator, check) {
        (_, true) => "checked",
        (Evaluator::Fast, false) => "fast",
        (Evaluator::Recurrence, false) => "recurrence",
    };
    Ok(Output {
        command: "eval",
        inputs: vec![
            ("k", k.to_string()),
            ("a", a.to_string()),
            ("n", n.to_string()),
            ("u", u.to_string()),
        ],
        result: json!({ "value": num(value) }),
        method: Some(method.into()),
        text: value.to_string(),
    })
}

pub fn is_perm(k: u64, a: i64, n: u64, method: PermMethodArg, cap: u64) -> CliResult {
    let f = modulus(n)?;
    let mut result = Map::new();
    let mut lines = Vec::new();
    if matches!(method, PermMethodArg::All | PermMethodArg::W) {
        let r = is_perm_w(k, &f)?;
        result.insert("by_w".into(), Value::Bool(r));
        lines.push(format!("gcd(k, w(n)) = 1: {r}"));
    }
    if matches!(method, PermMethodArg::All | PermMethodArg::V) {
        let r = is_perm_v(k, &f)?;
        result.insert("by_v".into(), Value::Bool(r));
        lines.push(format!("gcd(k, v(n)) = 1: {r}"));
    }
    let brute_requested = method == PermMethodArg::Brute;
    if brute_requested || (method == PermMethodArg::All && n <= cap) {
        let r = is_perm_brute(k, a, n, cap)?;
        result.insert("by_brute".into(), Value::Bool(r));
        lines.push(format!("brute force: {r}"));
    }
    Ok(Output {
        command: "is-perm",
        inputs: vec![("k", k.to_string()), ("a", a.to_string()), ("n", n.to_string())],
        result: Value::Object(result),
        method: Some(format!("{method:?}").to_lowercase()),
        text: lines.join("\n"),
    })
}

pub fn profile_cmd(n: u64) -> CliResult {
    let p = profile(&at_least_two(n)?)?;
    let text = format!(
        "n={} e={} l0={} ls=[{}] w={} v={}",
        p.n,
        p.e,
        p.l0.map_or("-".into(), |l| l.to_string()),
        p.ls.iter().map(u64::to_string).collect::<Vec<_>>().join(", "),
        p.w,
        p.v
    );
    Ok(Output {
        command: "profile",
        inputs: vec![("n", n.to_string())],
        result: json!({
            "e": num(p.e),
            "l0": p.l0.map(num),
            "ls": nums(&p.ls),
            "w": num(p.w),
            "v": num(p.v),
        }),
        method: None,
        text,
    })
}

/// Parses `residue:modulus`.
pub fn parse_congruence(s: &str) -> Result<Congruence, String> {
    let (r, m) = s
        .split_once(':')
        .ok_or_else(|| format!("expected residue:modulus, got {s:?}"))?;
    let r: i64 = r.trim().parse().map_err(|e| format!("bad residue {r:?}: {e}"))?;
    let m: u64 = m.trim().parse().map_err(|e| format!("bad modulus {m:?}: {e}"))?;
    Congruence::new(r, m).map_err(|e| e.to_string())
}

pub fn solve(cs: &[Congruence]) -> CliResult {
    let sol = solve_chain(cs)?;
    let system = cs
        .iter()
        .map(|c| format!("{}:{}", c.residue(), c.modulus()))
        .collect::<Vec<_>>()
        .join(",");
    let (result, text) = match sol {
        Some(s) => (
            json!({ "solvable": true, "residue": num(s.residue), "modulus": num(s.modulus) }),
            format!("x = {} mod {}", s.residue, s.modulus),
        ),
        None => (json!({ "solvable": false }), "no solution".to_string()),
    };
    Ok(Output {
        command: "solve",
        inputs: vec![("system", system)],
        result,
        method: None,
        text,
    })
}

fn fmt_tuple(t: &[u64]) -> String {
    format!(
        "({})",
        t.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
    )
}

pub fn kernel(n: u64, with_witnesses: bool) -> CliResult {
    let k = enumerate_kernel(&at_least_two(n)?)?;
    let w = k.profile.w;
    let mut text = format!(
        "K_{n} = {{{}}} mod {w}  |K_{n}| = {}",
        k.kernel.iter().map(u64::to_string).collect::<Vec<_>>().join(", "),
        k.kernel.len()
    );
    let mut result = json!({
        "w": num(w),
        "kernel": nums(&k.kernel),
        "size": num(k.kernel.len()),
    });
    if with_witnesses {
        let moduli = k.profile.moduli();
        text.push_str(&format!("\nmoduli {}", fmt_tuple(&moduli)));
        let mut map = Map::new();
        for (e, tuple) in &k.witnesses {
            text.push_str(&format!("\n  {e} <- {}", fmt_tuple(tuple)));
            map.insert(e.to_string(), nums(tuple));
        }
        result["moduli"] = nums(&moduli);
        result["witnesses"] = Value::Object(map);
    }
    Ok(Output {
        command: "kernel",
        inputs: vec![("n", n.to_string())],
        result,
        method: Some("kernel_enum".into()),
        text,
    })
}

fn report_output(n: u64, r: &GroupOrderReport) -> Output {
    Output {
        command: "order",
        inputs: vec![("n", n.to_string())],
        result: json!({
            "n": num(r.n),
            "w": num(r.w),
            "phi_w": num(r.phi_w),
            "kernel_size": num(r.kernel_size),
            "order": num(r.order),
        }),
        method: Some(r.method.to_string()),
        text: format!(
            "|G_{n}| = {}  (w = {}, phi(w) = {}, |K| = {}, method = {})",
            r.order, r.w, r.phi_w, r.kernel_size, r.method
        ),
    }
}

pub fn order(n: u64, method: OrderMethodArg, cap: u64) -> CliResult {
    if n == 0 {
        return Err(CliError::usage("n must be at least 1"));
    }
    if n == 1 {
        return Ok(report_output(1, &GroupOrderReport::trivial()));
    }
    let f = factorize(n)?;
    let report = match method {
        OrderMethodArg::Auto => group_order_auto(&f)?,
        OrderMethodArg::Closed => group_order_closed(&f)?,
        OrderMethodArg::Enum => group_order(&f)?,
        OrderMethodArg::Oracle => group_order_oracle_report(n, cap)?,
    };
    Ok(report_output(n, &report))
}

/// Closed form against kernel enumeration for every prime power up to `max`.
pub fn table(max: u64) -> CliResult {
    let mut rows = Vec::new();
    let mut text = vec![format!("{:>8} {:>6} {:>4} {:>14} {:>14}", "p^e", "p", "e", "closed", "enumerated")];
    let mut all_agree = true;
    for p in (2..=max).filter(|&p| is_prime(p)) {
        let (mut q, mut e) = (p, 1u32);
        while q <= max {
            let closed = group_order_closed_pe(p, e)?;
            let enumerated = group_order(&factorize(q)?)?.order;
            all_agree &= closed == enumerated;
            rows.push(json!({
                "n": num(q), "p": num(p), "e": num(e),
                "closed": num(closed), "enumerated": num(enumerated),
                "agree": closed == enumerated,
            }));
            text.push(format!("{q:>8} {p:>6} {e:>4} {closed:>14} {enumerated:>14}"));
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
            e += 1;
        }
    }
    Ok(Output {
        command: "table",
        inputs: vec![("max", max.to_string())],
        result: json!({ "rows": rows, "all_agree": all_agree }),
        method: None,
        text: text.join("\n"),
    })
}

/// Oracle sweep over `2..=max_n`, plus seeded spot checks of the two
/// evaluators. Exit code 1 (via `CliError`) on the first mismatch.
pub fn verify(max_n: u64, cap: u64, seed: u64) -> Result<(Output, bool), CliError> {
    if max_n < 2 {
        return Err(CliError::usage("--max-n must be at least 2"));
    }
    if max_n > cap {
        return Err(Error::CapExceeded { n: max_n, cap }.into());
    }
    let start = Instant::now();
    let ns: Vec<u64> = (2..=max_n).collect();
    let summaries = summarize_all(&ns, cap, Execution::default())?;
    let mut counterexample = None;
    for s in &summaries {
        let f = factorize(s.n)?;
        let k = enumerate_kernel(&f)?;
        let order = group_order(&f)?.order;
        if k.kernel != s.kernel {
            counterexample = Some(format!(
                "n={}: enumerated kernel {:?}, oracle kernel {:?}",
                s.n, k.kernel, s.kernel
            ));
        } else if order != s.distinct_maps {
            counterexample = Some(format!(
                "n={}: enumerated |G| = {order}, oracle distinct maps = {}",
                s.n, s.distinct_maps
            ));
        }
        if counterexample.is_some() {
            break;
        }
    }
    if counterexample.is_none() {
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=max_n);
            let k = rng.gen_range(0..=2000);
            let u = rng.gen_range(0..n);
            let p = DicksonParams::new(k, 1, n)?;
            let (fast, slow) = (eval_fast(&p, u), eval_recurrence(&p, u));
            if fast != slow {
                counterexample = Some(format!("D_{k}({u}) mod {n}: fast {fast}, recurrence {slow}"));
                break;
            }
        }
    }
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let passed = counterexample.is_none();
    let text = match &counterexample {
        None => format!("verify: pass, n in [2, {max_n}] ({runtime_ms:.1} ms)"),
        Some(c) => format!("verify: FAIL, {c}"),
    };
    Ok((
        Output {
            command: "verify",
            inputs: vec![("max_n", max_n.to_string()), ("seed", seed.to_string())],
            result: json!({
                "passed": passed,
                "checked": num(summaries.len()),
                "counterexample": counterexample,
                "runtime_ms": format!("{runtime_ms:.3}"),
            }),
            method: Some("oracle".into()),
            text,
        },
        passed,
    ))
}
