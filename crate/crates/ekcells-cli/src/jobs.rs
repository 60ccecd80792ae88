//! Validation of options into jobs, and job execution.

use std::collections::BTreeMap;
use std::path::Path;

use ekcells::bar_koszul::{
    e1_homology_from_bar, koszul_report, tor_csv, tor_dims, GradedAlgebraPresentation, QuadraticDatum,
};
use ekcells::bigraded::{min_slope_with_witness, Bidegree, GeneratorList, HilbertTable, Slope, Window};
use ekcells::dyer_lashof::{enumerate_free_wk_basis, quotient_hilbert, BasisOptions, WParams};
use ekcells::exactlin::{is_prime, FieldSpec};
use ekcells::gerstenhaber::Level;
use ekcells::groupoid_splitting::{
    check_standard_connectivity, connectivity_csv, partition_complex_homology, GroupoidFamily, MonoidalGroupoidSpec,
};
use ekcells::stability::{
    char_p_slope, connectivity_convolve, quillen_table, quotient_slope, transfer_down, transfer_up, two_thirds_check,
    AbstractConnectivity, CellList, ConnValue,
};
use serde_json::{json, Value};

use crate::config::{CommandName, Format, Options};
use crate::sweep::random_generator_sets;
use crate::CliError;

/// A validated unit of work.
#[derive(Debug)]
pub enum Job {
    FreeBasis { gens: GeneratorList, params: WParams, window: Window, reduced: bool },
    Quotient { gens: GeneratorList, params: WParams, window: Window, kill: Vec<String> },
    Tor(GradedAlgebraPresentation),
    E1Homology(GradedAlgebraPresentation),
    Splitting { groupoid: MonoidalGroupoidSpec, nmax: u32, field: FieldSpec },
    Partition { nmax: u32, field: FieldSpec },
    Koszul { groupoid: MonoidalGroupoidSpec, nmax: u32, field: FieldSpec },
    QuotientSlope { sets: Vec<GeneratorList>, params: WParams, window: Window, kill: Vec<String> },
    TwoThirds { ell: u64, k: Level, extra: CellList, window: Window },
    Glnfq { quillen: Option<(u64, u64, Window)>, char_p: Option<u64> },
    Convolve { rho: AbstractConnectivity, rho2: AbstractConnectivity, nmax: u32 },
    Transfer { up: bool, rho: AbstractConnectivity, l: u32, k: Level, nmax: u32 },
}

impl Job {
    pub fn default_format(&self) -> Format {
        match self {
            Job::QuotientSlope { .. } | Job::TwoThirds { .. } | Job::Glnfq { .. } | Job::Transfer { .. } => {
                Format::Json
            }
            _ => Format::Csv,
        }
    }
}

/// What a job produced: the output file contents, a check verdict and a one-line summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub verdict: bool,
    pub summary: String,
}

fn need<T: Clone>(v: &Option<T>, field: &'static str) -> Result<T, CliError> {
    v.clone().ok_or(CliError::Missing(field))
}

fn field_of(o: &Options, default: Option<u64>) -> Result<FieldSpec, CliError> {
    let ell = match (o.ell, default) {
        (Some(e), _) | (None, Some(e)) => e,
        (None, None) => return Err(CliError::Missing("ell")),
    };
    FieldSpec::new(ell).map_err(|e| CliError::field("ell", e))
}

fn level_of(o: &Options, default: Option<Level>) -> Result<Level, CliError> {
    let k = match (&o.k, default) {
        (Some(s), _) => Level::parse(s).ok_or_else(|| CliError::field("k", format!("`{s}` is not a level")))?,
        (None, Some(k)) => k,
        (None, None) => return Err(CliError::Missing("k")),
    };
    if k == Level::Finite(0) {
        return Err(CliError::field("k", "must be at least 1"));
    }
    Ok(k)
}

fn window_of(o: &Options) -> Result<Window, CliError> {
    let s = need(&o.window, "window")?;
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::field("window", format!("`{s}` is not `nmax,dmax`"));
    match parts.as_slice() {
        [n, d] => Ok(Window::new(n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn gens_of(o: &Options) -> Result<GeneratorList, CliError> {
    GeneratorList::parse(&need(&o.gens, "gens")?).map_err(|e| CliError::field("gens", e))
}

fn kill_of(o: &Options, gens: Option<&GeneratorList>, default: &[&str]) -> Result<Vec<String>, CliError> {
    let kill: Vec<String> = match &o.kill {
        Some(s) => s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect(),
        None => default.iter().map(|s| s.to_string()).collect(),
    };
    if let Some(g) = gens {
        if let Some(bad) = kill.iter().find(|k| g.index_of(k).is_none()) {
            return Err(CliError::field("kill", format!("`{bad}` is not a generator")));
        }
    }
    Ok(kill)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn groupoid_of(o: &Options, nmax: u32) -> Result<MonoidalGroupoidSpec, CliError> {
    if let Some(p) = &o.input {
        return MonoidalGroupoidSpec::from_json(&read(p)?).map_err(|e| CliError::field("input", e));
    }
    let family = match need(&o.family, "family")?.as_str() {
        "trivial-n" | "trivial" => GroupoidFamily::TrivialN,
        "symmetric" => GroupoidFamily::Symmetric,
        "gl" => {
            let q = need(&o.q, "q")?;
            if !is_prime(q) {
                return Err(CliError::field("q", "general linear groups need a prime q"));
            }
            GroupoidFamily::GeneralLinear { q: q as u32 }
        }
        f => return Err(CliError::field("family", format!("unknown family `{f}`"))),
    };
    Ok(MonoidalGroupoidSpec::new(family, nmax))
}

fn algebra_of(o: &Options, allow_unit: bool) -> Result<GradedAlgebraPresentation, CliError> {
    if let Some(p) = &o.input {
        return GradedAlgebraPresentation::from_json(&read(p)?).map_err(|e| CliError::field("input", e));
    }
    let field = field_of(o, None)?;
    let window = window_of(o)?;
    let kind = o.algebra.clone().unwrap_or_else(|| "free-wk".into());
    let built = match kind.as_str() {
        "unit" if allow_unit => Ok(GradedAlgebraPresentation::unit_algebra(field, window)),
        "free-wk" => {
            let k = level_of(o, None)?;
            GradedAlgebraPresentation::free_wk(&gens_of(o)?, &WParams::new(k, field), window)
        }
        "free-gca" => GradedAlgebraPresentation::free_graded_commutative(field, window, &gens_of(o)?),
        "trivial" => GradedAlgebraPresentation::trivial(field, window, &gens_of(o)?),
        a => return Err(CliError::field("algebra", format!("unknown algebra `{a}`"))),
    };
    built.map_err(|e| CliError::field("gens", e))
}

fn rho_of(s: &str, field: &'static str) -> Result<AbstractConnectivity, CliError> {
    let s = s.trim();
    if s.starts_with('{') {
        return AbstractConnectivity::from_json(s).map_err(|e| CliError::field(field, e));
    }
    let bad = || CliError::field(field, format!("cannot read `{s}`"));
    let ints =
        |t: &str| -> Result<Vec<i64>, CliError> { t.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect() };
    let (head, tail) = s.split_once(':').unwrap_or((s, ""));
    match (head, ints(tail).ok().as_deref()) {
        ("unit", _) => Ok(AbstractConnectivity::unit()),
        ("const", _) => {
            let v = match tail.trim() {
                "inf" => ConnValue::PosInf,
                "-inf" => ConnValue::NegInf,
                t => ConnValue::Fin(t.parse().map_err(|_| bad())?),
            };
            Ok(AbstractConnectivity::constant(v))
        }
        ("affine", Some(&[a, b])) => Ok(AbstractConnectivity::affine(a, b)),
        ("linear", Some(&[num, den, off])) if den > 0 => Ok(AbstractConnectivity::linear(num, den, off)),
        _ => Err(bad()),
    }
}

/// Checks every parameter `command` reads, without computing anything heavy.
pub fn validate(command: CommandName, o: &Options) -> Result<Job, CliError> {
    use CommandName as C;
    Ok(match command {
        C::FreeBasis => Job::FreeBasis {
            gens: gens_of(o)?,
            params: WParams::new(level_of(o, None)?, field_of(o, None)?),
            window: window_of(o)?,
            reduced: o.reduced.unwrap_or(false),
        },
        C::Quotient => {
            let gens = gens_of(o)?;
            let kill = kill_of(o, Some(&gens), &[])?;
            Job::Quotient {
                params: WParams::new(level_of(o, None)?, field_of(o, None)?),
                window: window_of(o)?,
                kill,
                gens,
            }
        }
        C::Tor => Job::Tor(algebra_of(o, false)?),
        C::E1Homology => Job::E1Homology(algebra_of(o, true)?),
        C::Splitting | C::Koszul => {
            let nmax = need(&o.nmax, "nmax")?;
            if nmax == 0 {
                return Err(CliError::field("nmax", "must be positive"));
            }
            let groupoid = groupoid_of(o, nmax)?;
            let field = field_of(o, Some(0))?;
            if command == C::Splitting {
                Job::Splitting { groupoid, nmax, field }
            } else {
                Job::Koszul { groupoid, nmax, field }
            }
        }
        C::Partition => {
            let nmax = need(&o.nmax, "nmax")?;
            if nmax < 2 {
                return Err(CliError::field("nmax", "the partition complex needs n >= 2"));
            }
            Job::Partition { nmax, field: field_of(o, Some(0))? }
        }
        C::Stability => match o.mode.as_deref().unwrap_or("quotient-slope") {
            "quotient-slope" => {
                let params = WParams::new(level_of(o, None)?, field_of(o, None)?);
                let window = window_of(o)?;
                let sets = match (&o.gens, o.sets) {
                    (Some(_), None) => vec![gens_of(o)?],
                    (None, Some(n)) => random_generator_sets(o.seed.unwrap_or(0), n),
                    (Some(_), Some(_)) => return Err(CliError::field("sets", "give either `gens` or `sets`")),
                    (None, None) => return Err(CliError::Missing("gens")),
                };
                let kill = kill_of(o, None, &["sigma"])?;
                for s in &sets {
                    kill_of(o, Some(s), &["sigma"])?;
                }
                Job::QuotientSlope { sets, params, window, kill }
            }
            "two-thirds" => {
                let ell = need(&o.ell, "ell")?;
                if !is_prime(ell) {
                    return Err(CliError::field("ell", "the two-thirds check needs a prime"));
                }
                let extra = match &o.input {
                    Some(p) => CellList::from_json(&read(p)?).map_err(|e| CliError::field("input", e))?,
                    None => CellList::default(),
                };
                Job::TwoThirds { ell, k: level_of(o, Some(Level::Finite(2)))?, extra, window: window_of(o)? }
            }
            m => return Err(CliError::field("mode", format!("unknown stability mode `{m}`"))),
        },
        C::Glnfq => {
            let quillen = match o.q {
                Some(q) => {
                    let ell = need(&o.ell, "ell")?;
                    if ell == 2 || !is_prime(ell) {
                        return Err(CliError::field("ell", "Quillen tables need an odd prime"));
                    }
                    Some((ell, q, window_of(o)?))
                }
                None => None,
            };
            let char_p = match o.prime {
                Some(p) if !is_prime(p) => return Err(CliError::field("prime", format!("{p} is not prime"))),
                p => p,
            };
            if quillen.is_none() && char_p.is_none() {
                return Err(CliError::Missing("q"));
            }
            Job::Glnfq { quillen, char_p }
        }
        C::Connectivity => {
            let rho = rho_of(&need(&o.rho, "rho")?, "rho")?;
            let nmax = need(&o.nmax, "nmax")?;
            match o.mode.as_deref().unwrap_or("up") {
                "convolve" => Job::Convolve { rho, rho2: rho_of(&need(&o.rho2, "rho2")?, "rho2")?, nmax },
                m @ ("up" | "down") => {
                    let l = need(&o.l, "l")?;
                    let k = level_of(o, None)?;
                    if Level::Finite(l) > k {
                        return Err(CliError::field("l", format!("l = {l} exceeds k = {k}")));
                    }
                    Job::Transfer { up: m == "up", rho, l, k, nmax }
                }
                m => return Err(CliError::field("mode", format!("unknown connectivity mode `{m}`"))),
            }
        }
    })
}

fn table_json(t: &HilbertTable) -> Value {
    Value::Array(t.iter().map(|(b, v)| json!({"n": b.n, "d": b.d, "dim": v})).collect())
}

fn slope_json(s: Slope, w: Option<Bidegree>) -> Value {
    json!({"slope": s.to_string(), "witness": w.map(|b| [b.n, b.d])})
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn render_gens(g: &GeneratorList) -> String {
    g.iter().map(|g| format!("{}:{},{}", g.name, g.bidegree.n, g.bidegree.d)).collect::<Vec<_>>().join("; ")
}

fn outcome(text: String, verdict: bool, summary: String) -> Result<Outcome, CliError> {
    Ok(Outcome { text, verdict, summary })
}

/// Runs a validated job and renders its output.
pub fn execute(job: &Job, format: Format) -> Result<Outcome, CliError> {
    let csv = format == Format::Csv;
    match job {
        Job::FreeBasis { gens, params, window, reduced } => {
            let opts = BasisOptions { reduced: *reduced, ..BasisOptions::default() };
            let b = enumerate_free_wk_basis(gens, params, *window, opts).map_err(CliError::compute)?;
            let summary = format!("{} generators, total dimension {}", b.generators.len(), b.table.total());
            let text = if csv {
                b.table.to_csv()
            } else {
                let g: Vec<String> = b.generators.iter().map(|g| g.render(gens, params.ell())).collect();
                pretty(&json!({"table": table_json(&b.table), "generators": g}))
            };
            outcome(text, true, summary)
        }
        Job::Quotient { gens, params, window, kill } => {
            let t = quotient_hilbert(gens, kill, params, *window).map_err(CliError::compute)?;
            let (s, w) = min_slope_with_witness(&t);
            let summary = format!("minimal slope {s}{}", w.map(|b| format!(" at {b}")).unwrap_or_default());
            let text =
                if csv { t.to_csv() } else { pretty(&json!({"table": table_json(&t), "min_slope": slope_json(s, w)})) };
            outcome(text, true, summary)
        }
        Job::Tor(a) => {
            let t = tor_dims(a).map_err(CliError::compute)?;
            let summary = format!("{} nonzero Tor groups", t.values().filter(|&&v| v > 0).count());
            let text = if csv {
                tor_csv(&t)
            } else {
                let rows: Vec<Value> =
                    t.iter().map(|((p, b), v)| json!({"p": p, "n": b.n, "d": b.d, "dim": v})).collect();
                pretty(&Value::Array(rows))
            };
            outcome(text, true, summary)
        }
        Job::E1Homology(a) => {
            let t = e1_homology_from_bar(a).map_err(CliError::compute)?;
            let summary = format!("total dimension {}", t.total());
            outcome(if csv { t.to_csv() } else { pretty(&table_json(&t)) }, true, summary)
        }
        Job::Splitting { groupoid, nmax, field } => {
            let rows = check_standard_connectivity(groupoid, *nmax, *field).map_err(CliError::compute)?;
            let ok = rows.iter().all(|r| r.concentrated);
            let dims: Vec<String> = rows.iter().map(|r| r.steinberg_dim.to_string()).collect();
            let summary = format!(
                "{} at every rank; Steinberg dims {}",
                if ok { "concentrated" } else { "not concentrated" },
                dims.join(",")
            );
            let text = if csv { connectivity_csv(&rows) } else { pretty(&serde_json::to_value(&rows).expect("rows")) };
            outcome(text, ok, summary)
        }
        Job::Partition { nmax, field } => {
            let mut rows = Vec::new();
            let mut ok = true;
            let mut factorial = 1u128;
            for n in 2..=*nmax {
                factorial *= (n - 1) as u128;
                let (rank, conc) = partition_complex_homology(n, *field).map_err(CliError::compute)?;
                ok &= conc && rank as u128 == factorial;
                rows.push((n, rank, factorial, conc));
            }
            let summary = format!("partition complexes {} for n <= {nmax}", if ok { "as expected" } else { "deviate" });
            let text = if csv {
                csv_rows(
                    &["n", "rank", "expected", "concentrated"],
                    rows.iter().map(|(n, r, f, c)| vec![n.to_string(), r.to_string(), f.to_string(), c.to_string()]),
                )
            } else {
                let v: Vec<Value> = rows
                    .iter()
                    .map(|(n, r, f, c)| json!({"n": n, "rank": r, "expected": f.to_string(), "concentrated": c}))
                    .collect();
                pretty(&Value::Array(v))
            };
            outcome(text, ok, summary)
        }
        Job::Koszul { groupoid, nmax, field } => {
            let d = QuadraticDatum::fundamental_example(*field, groupoid.clone()).map_err(CliError::compute)?;
            let rows = koszul_report(&d, Window::new(*nmax, *nmax)).map_err(CliError::compute)?;
            let ok = rows.iter().all(|r| r.agrees);
            let summary = format!("Koszul check {} for n <= {nmax}", if ok { "holds" } else { "fails" });
            let text = if csv {
                csv_rows(
                    &["n", "algebra_dim", "cobar_homology", "agrees"],
                    rows.iter().map(|r| {
                        let h: Vec<String> = r.cobar_homology.iter().map(|(d, v)| format!("{d}:{v}")).collect();
                        vec![r.n.to_string(), r.algebra_dim.to_string(), h.join(" "), r.agrees.to_string()]
                    }),
                )
            } else {
                pretty(&serde_json::to_value(&rows).expect("rows"))
            };
            outcome(text, ok, summary)
        }
        Job::QuotientSlope { sets, params, window, kill } => {
            let reports = sets
                .iter()
                .map(|g| quotient_slope(g, params, *window, kill).map_err(CliError::compute))
                .collect::<Result<Vec<_>, _>>()?;
            let ok = reports.iter().all(|r| r.vanishing_holds);
            let low = reports.iter().map(|r| r.slope).min().unwrap_or(Slope::Infinite);
            let summary = format!(
                "{} of {} sets have slope >= 1/2; lowest slope {low}",
                reports.iter().filter(|r| r.vanishing_holds).count(),
                reports.len()
            );
            let text = if csv {
                csv_rows(
                    &["set", "gens", "slope", "witness", "vanishing_holds", "violations"],
                    sets.iter().zip(&reports).enumerate().map(|(i, (g, r))| {
                        vec![
                            i.to_string(),
                            render_gens(g),
                            r.slope.to_string(),
                            r.witness.map(|b| b.to_string()).unwrap_or_default(),
                            r.vanishing_holds.to_string(),
                            r.violations.join("; "),
                        ]
                    }),
                )
            } else {
                let v: Vec<Value> = sets
                    .iter()
                    .zip(&reports)
                    .map(|(g, r)| {
                        json!({
                            "gens": render_gens(g),
                            "min_slope": slope_json(r.slope, r.witness),
                            "vanishing_holds": r.vanishing_holds,
                            "violations": r.violations,
                        })
                    })
                    .collect();
                pretty(&json!({"kill": kill, "reports": v}))
            };
            outcome(text, ok, summary)
        }
        Job::TwoThirds { ell, k, extra, window } => {
            let r = two_thirds_check(*ell, *k, extra, *window).map_err(CliError::compute)?;
            let summary = format!(
                "two-thirds check {}: slope {} (left term {})",
                if r.holds { "holds" } else { "fails" },
                r.slope,
                r.left_slope
            );
            let text = if csv {
                csv_rows(
                    &["n", "d", "q", "dim"],
                    r.table.iter().map(|(t, v)| vec![t.n.to_string(), t.d.to_string(), t.q.to_string(), v.to_string()]),
                )
            } else {
                let table: Vec<Value> =
                    r.table.iter().map(|(t, v)| json!({"n": t.n, "d": t.d, "q": t.q, "dim": v})).collect();
                pretty(&json!({
                    "holds": r.holds,
                    "min_slope": slope_json(r.slope, r.witness),
                    "left_min_slope": slope_json(r.left_slope, r.left_witness),
                    "table": table,
                }))
            };
            outcome(text, r.holds, summary)
        }
        Job::Glnfq { quillen, char_p } => {
            let mut report = BTreeMap::new();
            let mut ok = true;
            let mut summary = Vec::new();
            let mut csv_text = String::new();
            if let Some((ell, q, w)) = quillen {
                let r = quillen_table(*ell, *q, *w).map_err(CliError::compute)?;
                ok &= r.holds;
                summary.push(format!(
                    "quotient vanishes for d/n < {}: {}{}",
                    r.bound,
                    r.holds,
                    if r.sharp { " (sharp)" } else { "" }
                ));
                csv_text = r.quotient.to_csv();
                report.insert(
                    "quillen",
                    json!({
                        "ell": ell, "q": q, "r": r.r, "bound": r.bound.to_string(),
                        "min_slope": slope_json(r.slope, r.witness),
                        "holds": r.holds, "sharp": r.sharp,
                        "table": table_json(&r.table), "quotient": table_json(&r.quotient),
                    }),
                );
            }
            if let Some(p) = char_p {
                let c = char_p_slope(*p).map_err(CliError::compute)?;
                summary.push(format!("char {p}: slope {} witnessed at {}", c.slope, c.witness));
                if csv_text.is_empty() {
                    csv_text = csv_rows(
                        &["p", "slope", "witness_n", "witness_d"],
                        [vec![p.to_string(), c.slope.to_string(), c.witness.n.to_string(), c.witness.d.to_string()]],
                    );
                }
                report.insert(
                    "char_p",
                    json!({"p": p, "slope": c.slope.to_string(), "witness": [c.witness.n, c.witness.d]}),
                );
            }
            let text = if csv { csv_text } else { pretty(&serde_json::to_value(&report).expect("report")) };
            outcome(text, ok, summary.join("; "))
        }
        Job::Convolve { rho, rho2, nmax } => {
            let c = connectivity_convolve(rho, rho2).tabulate(*nmax);
            let text = if csv {
                csv_rows(&["n", "value"], c.iter().enumerate().map(|(n, v)| vec![n.to_string(), v.to_string()]))
            } else {
                pretty(&serde_json::to_value(&c).expect("values"))
            };
            outcome(text, true, format!("convolution tabulated for n <= {nmax}"))
        }
        Job::Transfer { up, rho, l, k, nmax } => {
            let r = if *up { transfer_up(rho, *l, *k, *nmax) } else { transfer_down(rho, *l, *k, *nmax) }
                .map_err(CliError::compute)?;
            let summary = r.render().lines().take(2).collect::<Vec<_>>().join("; ");
            let text = if csv {
                let line = r.line.clone().unwrap_or_default();
                csv_rows(
                    &["n", "vanishes_below"],
                    line.iter().enumerate().map(|(n, v)| vec![n.to_string(), v.to_string()]),
                )
            } else {
                let mut v = serde_json::to_value(&r).expect("report");
                v["k"] = Value::String(r.k.to_string());
                v["text"] = Value::String(r.render());
                pretty(&v)
            };
            outcome(text, r.hypothesis.holds, summary)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> Options {
        Options::default()
    }

    #[test]
    fn errors_name_the_field() {
        let o = Options {
            ell: Some(4),
            k: Some("2".into()),
            window: Some("3,3".into()),
            gens: Some("s:1,0".into()),
            ..opts()
        };
        let e = validate(CommandName::FreeBasis, &o).unwrap_err();
        assert!(matches!(e, CliError::Field { field: "ell", .. }), "{e}");
        let o = Options { ell: Some(2), k: Some("x".into()), ..o };
        assert!(matches!(validate(CommandName::FreeBasis, &o), Err(CliError::Field { field: "k", .. })));
        let o = Options { k: Some("inf".into()), window: Some("3".into()), ..o };
        assert!(matches!(validate(CommandName::FreeBasis, &o), Err(CliError::Field { field: "window", .. })));
        let o = Options { window: Some("3,3".into()), gens: None, ..o };
        assert!(matches!(validate(CommandName::FreeBasis, &o), Err(CliError::Missing("gens"))));
    }

    #[test]
    fn connectivity_shorthands() {
        assert_eq!(rho_of("affine:1,-1", "rho").unwrap(), AbstractConnectivity::affine(1, -1));
        assert_eq!(rho_of("linear:1,2,0", "rho").unwrap(), AbstractConnectivity::linear(1, 2, 0));
        assert_eq!(rho_of("const:inf", "rho").unwrap(), AbstractConnectivity::constant(ConnValue::PosInf));
        assert_eq!(rho_of("unit", "rho").unwrap(), AbstractConnectivity::unit());
        assert!(rho_of("linear:1,0,0", "rho").is_err());
        assert!(rho_of("affine:1", "rho").is_err());
        let j = r#"{"default": {"kind": "linear", "num": 1, "den": 1, "offset": 0}}"#;
        assert_eq!(rho_of(j, "rho").unwrap(), AbstractConnectivity::affine(1, 0));
    }

    #[test]
    fn kill_must_name_generators() {
        let o = Options {
            ell: Some(2),
            k: Some("2".into()),
            window: Some("3,3".into()),
            gens: Some("s:1,0".into()),
            kill: Some("t".into()),
            ..opts()
        };
        assert!(matches!(validate(CommandName::Quotient, &o), Err(CliError::Field { field: "kill", .. })));
    }
}
