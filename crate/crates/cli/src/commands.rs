use std::io::Write;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use fneq::analysis::{nullspace_basis, oracle_solve_main, verify_structure, Classification, ClauseCheck, GBranch, OracleConfig};
use fneq::equations::{max_residual, ResidualScan};
use fneq::families::{sweep, SweepConfig};
use fneq::morphisms::{
    enumerate_admissible_mu, enumerate_involutive_automorphisms, enumerate_multiplicative, odd_additive_basis,
    RootValue,
};
use fneq::{
    Carrier, Element, EquationId, Exact, InvolutiveAutomorphism, MultiplicativeFunction, Scalar, ScalarFunction,
    Scope, Slot, Slots, WeightFunction, C64,
};
use serde_json::Value;

use crate::carrier_file::{parse_carrier, CarrierFile};
use crate::json::{self, insert, obj, text, uint};
use crate::parse::{parse_complex_list, parse_matrix};
use crate::values::parse_values;
use crate::{CliError, Command, Common};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn invalid(e: impl ToString) -> CliError {
    CliError::Validation(e.to_string())
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Enumerate(_) => "enumerate",
            Command::Families { .. } => "families",
            Command::Verify { .. } => "verify",
            Command::Nullspace(_) => "nullspace",
            Command::Oracle { .. } => "oracle",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Enumerate(c) | Command::Nullspace(c) => c,
            Command::Families { common, .. } | Command::Verify { common, .. } | Command::Oracle { common, .. } => common,
        }
    }
}

struct Ctx<'a> {
    file: CarrierFile,
    carrier: Arc<Carrier>,
    scope: Scope,
    common: &'a Common,
}

impl Ctx<'_> {
    fn finite(&self) -> bool {
        self.carrier.as_finite().is_some()
    }

    fn require_finite(&self, what: &str) -> Result<(), CliError> {
        if self.finite() {
            Ok(())
        } else {
            Err(invalid(format!("{what} needs a finite carrier")))
        }
    }
}

/// Human text plus the JSON report under construction.
struct Report {
    human: String,
    json: Value,
}

impl Report {
    fn line(&mut self, s: impl AsRef<str>) {
        self.human.push_str(s.as_ref());
        self.human.push('\n');
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn execute(command: Command, echo: Vec<String>, out: &mut dyn Write) -> Result<bool, CliError> {
    let start = Instant::now();
    let common = command.common();
    let file = parse_carrier(&read(&common.carrier)?).map_err(|e| invalid(format!("{}: {e}", common.carrier.display())))?;
    if common.bound < 0 {
        return Err(usage("--box must be non-negative"));
    }
    if common.tolerance.is_nan() || common.tolerance < 0.0 {
        return Err(usage("--tolerance must be non-negative"));
    }
    let carrier = Arc::new(file.carrier.clone());
    let scope = if carrier.as_finite().is_some() { Scope::AllPairs } else { Scope::Box(common.bound) };
    let exact = carrier.as_finite().is_some() && !common.float && !matches!(command, Command::Verify { .. } | Command::Oracle { .. });
    let ctx = Ctx { file, carrier, scope, common };

    let mut report = Report { human: String::new(), json: carrier_json(&ctx) };
    insert(&mut report.json, "command", text(command.name()));
    insert(&mut report.json, "args", Value::Array(echo.into_iter().map(Value::String).collect()));
    insert(&mut report.json, "scalar", text(if exact { "exact" } else { "f64" }));
    insert(&mut report.json, "tolerance", json::float(common.tolerance));
    insert(&mut report.json, "seed", Value::Null);
    report.line(format!("carrier: {}", ctx.carrier.describe()));

    let passed = match &command {
        Command::Enumerate(_) if exact => enumerate::<Exact>(&ctx, &mut report)?,
        Command::Enumerate(_) => enumerate::<C64>(&ctx, &mut report)?,
        Command::Families { equation, chi, .. } => {
            let equation = equation.as_deref().map(parse_equation).transpose()?;
            if exact {
                families::<Exact>(&ctx, equation, chi, &mut report)?
            } else {
                families::<C64>(&ctx, equation, chi, &mut report)?
            }
        }
        Command::Verify { equation, values, .. } => verify(&ctx, parse_equation(equation)?, values, &mut report)?,
        Command::Nullspace(_) if exact => nullspace::<Exact>(&ctx, &mut report)?,
        Command::Nullspace(_) => nullspace::<C64>(&ctx, &mut report)?,
        Command::Oracle { starts, seed, .. } => oracle(&ctx, *starts, *seed, &mut report)?,
    };

    insert(&mut report.json, "passed", Value::Bool(passed));
    let elapsed = start.elapsed().as_secs_f64();
    if common.record_time {
        insert(&mut report.json, "wall_time_seconds", json::float(elapsed));
    }
    report.line(format!("{} in {elapsed:.2}s", if passed { "PASS" } else { "FAIL" }));
    if let Some(path) = &common.json {
        std::fs::write(path, json::to_string(&report.json))
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    out.write_all(report.human.as_bytes()).map_err(|e| usage(format!("cannot write output: {e}")))?;
    Ok(passed)
}

fn parse_equation(s: &str) -> Result<EquationId, CliError> {
    s.parse().map_err(|e: fneq::equations::EquationError| usage(e.to_string()))
}

fn carrier_json(ctx: &Ctx<'_>) -> Value {
    let summary = match ctx.carrier.as_ref() {
        Carrier::Finite(m) => {
            let mut v = obj([
                ("kind", text("finite")),
                ("size", uint(m.size())),
                ("commutative", Value::Bool(m.is_commutative())),
                ("group", Value::Bool(m.is_group())),
                ("squares_generate", Value::Bool(m.is_generated_by_squares())),
            ]);
            if let Some(names) = &ctx.file.names {
                insert(&mut v, "names", Value::Array(names.iter().cloned().map(Value::String).collect()));
            }
            v
        }
        Carrier::Lattice(l) => obj([("kind", text("lattice")), ("rank", uint(l.rank())), ("box", json::int(ctx.common.bound))]),
    };
    obj([("carrier", summary)])
}

// ---- structure maps ----

struct Combo<T> {
    sigma_index: Option<usize>,
    mu_index: Option<usize>,
    weight: WeightFunction<T>,
}

impl<T: Scalar> Combo<T> {
    fn label(&self) -> String {
        let s = self.sigma_index.map_or("σ".to_string(), |i| format!("σ#{i}"));
        let m = self.mu_index.map_or("μ".to_string(), |i| format!("μ#{i}"));
        format!("{s} {} {m} {}", self.weight.sigma().describe(), mu_text(self.weight.mu()))
    }

    fn json(&self) -> Value {
        let sigma = obj([("index", opt_index(self.sigma_index)), ("map", text(self.weight.sigma().describe()))]);
        let mut mu = character_json(self.weight.mu());
        insert(&mut mu, "index", opt_index(self.mu_index));
        obj([("sigma", sigma), ("mu", mu)])
    }
}

fn opt_index(i: Option<usize>) -> Value {
    i.map_or(Value::Null, uint)
}

fn root_text(r: &RootValue) -> String {
    match r.rotation() {
        None => "0".into(),
        Some(q) if q == num_rational::Ratio::from_integer(0) => "1".into(),
        Some(q) => format!("e({q})"),
    }
}

fn mu_text<T: Scalar>(chi: &MultiplicativeFunction<T>) -> String {
    match (chi.roots(), chi.bases()) {
        (Some(r), _) => format!("({})", r.iter().map(root_text).collect::<Vec<_>>().join(", ")),
        (_, Some(b)) => format!("bases ({})", b.iter().map(|z| cx(z.to_complex64())).collect::<Vec<_>>().join(", ")),
        _ => String::new(),
    }
}

fn character_json<T: Scalar>(chi: &MultiplicativeFunction<T>) -> Value {
    match (chi.roots(), chi.bases()) {
        (Some(r), _) => obj([("values", Value::Array(r.iter().map(json::root).collect()))]),
        (_, Some(b)) => obj([("bases", Value::Array(b.iter().map(json::scalar).collect()))]),
        _ => obj([]),
    }
}

fn parse_index(flag: &str, s: &str) -> Result<usize, CliError> {
    s.trim().parse().map_err(|_| usage(format!("--{flag} expects an index, got `{s}`")))
}

fn pick<X>(flag: &str, items: Vec<X>, index: usize) -> Result<X, CliError> {
    let len = items.len();
    items
        .into_iter()
        .nth(index)
        .ok_or_else(|| invalid(format!("--{flag} {index} out of range: {len} available")))
}

fn sigma_list(ctx: &Ctx<'_>, single: bool) -> Result<Vec<(Option<usize>, InvolutiveAutomorphism)>, CliError> {
    let c = &ctx.carrier;
    if ctx.finite() {
        let all = enumerate_involutive_automorphisms(c).map_err(invalid)?;
        let position = |s: &InvolutiveAutomorphism| all.iter().position(|x| x == s);
        let chosen = match ctx.common.sigma.as_deref() {
            None if !single => return Ok(all.iter().cloned().enumerate().map(|(i, s)| (Some(i), s)).collect()),
            None | Some("id") => InvolutiveAutomorphism::identity(c),
            Some("neg") => InvolutiveAutomorphism::negation(c).map_err(invalid)?,
            Some(s) => {
                let i = parse_index("sigma", s)?;
                return Ok(vec![(Some(i), pick("sigma", all, i)?)]);
            }
        };
        Ok(vec![(position(&chosen), chosen)])
    } else {
        let sigma = match ctx.common.sigma.as_deref() {
            None | Some("neg") => InvolutiveAutomorphism::negation(c).map_err(invalid)?,
            Some("id") => InvolutiveAutomorphism::identity(c),
            Some(s) => {
                let m = parse_matrix(s).ok_or_else(|| usage(format!("--sigma expects id, neg or a matrix `a,b;c,d`, got `{s}`")))?;
                InvolutiveAutomorphism::from_matrix(c, m).map_err(invalid)?
            }
        };
        Ok(vec![(None, sigma)])
    }
}

fn from_c64<T: Scalar>(z: C64) -> Result<T, CliError> {
    T::from_complex64(z).ok_or_else(|| invalid("complex literals need --float"))
}

fn lattice_character<T: Scalar>(ctx: &Ctx<'_>, flag: &str, s: &str) -> Result<MultiplicativeFunction<T>, CliError> {
    let bases = parse_complex_list(s).ok_or_else(|| usage(format!("--{flag} expects comma-separated complex bases, got `{s}`")))?;
    let bases = bases.into_iter().map(from_c64).collect::<Result<Vec<T>, _>>()?;
    MultiplicativeFunction::lattice(&ctx.carrier, bases).map_err(invalid)
}

/// Selected (σ, μ) pairs. `single` picks σ = id and μ ≡ 1 when the flags are absent.
fn combos<T: Scalar>(ctx: &Ctx<'_>, single: bool) -> Result<Vec<Combo<T>>, CliError> {
    let mut out = Vec::new();
    for (sigma_index, sigma) in sigma_list(ctx, single)? {
        if !ctx.finite() {
            let weight = match ctx.common.mu.as_deref() {
                None => WeightFunction::trivial(&sigma),
                Some(s) => WeightFunction::new(lattice_character(ctx, "mu", s)?, sigma).map_err(invalid)?,
            };
            out.push(Combo { sigma_index, mu_index: None, weight });
            continue;
        }
        let mus = enumerate_admissible_mu::<T>(&sigma).map_err(invalid)?;
        match ctx.common.mu.as_deref() {
            None if !single => {
                out.extend(mus.into_iter().enumerate().map(|(i, weight)| Combo { sigma_index, mu_index: Some(i), weight }))
            }
            None => {
                let i = mus.iter().position(|w| w.mu().is_trivial()).expect("μ ≡ 1 is admissible");
                out.push(Combo { sigma_index, mu_index: Some(i), weight: mus[i].clone() });
            }
            Some(s) => {
                let i = parse_index("mu", s)?;
                out.push(Combo { sigma_index, mu_index: Some(i), weight: pick("mu", mus, i)? });
            }
        }
    }
    Ok(out)
}

// ---- formatting ----

fn trim(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn cx(z: C64) -> String {
    const EPS: f64 = 5e-7;
    match (z.re.abs() < EPS, z.im.abs() < EPS) {
        (_, true) => trim(z.re),
        (true, false) => format!("{}i", trim(z.im)),
        _ => format!("{}{}{}i", trim(z.re), if z.im < 0.0 { "-" } else { "+" }, trim(z.im.abs())),
    }
}

fn witness_text(w: &Option<(Element, Element)>) -> String {
    match w {
        Some((x, y)) => format!("({x}, {y})"),
        None => "-".into(),
    }
}

fn residual_text(scan: &ResidualScan) -> String {
    if scan.exact && scan.all_zero {
        "0 (exact)".into()
    } else {
        format!("{:.2e}", scan.max)
    }
}

fn scan_json(scan: &ResidualScan, passed: bool) -> Value {
    obj([
        ("max", json::float(scan.max)),
        ("exact_zero", Value::Bool(scan.exact && scan.all_zero)),
        ("witness", scan.witness.as_ref().map_or(Value::Null, |_| text(witness_text(&scan.witness)))),
        ("pairs", uint(scan.pairs)),
        ("passed", Value::Bool(passed)),
    ])
}

fn values_json<T: Scalar>(f: &ScalarFunction<T>, scope: Scope) -> Value {
    Value::Array(f.values(scope).iter().map(json::scalar).collect())
}

fn characters<T: Scalar>(ctx: &Ctx<'_>, flags: &[String]) -> Result<Vec<MultiplicativeFunction<T>>, CliError> {
    if ctx.finite() {
        return enumerate_multiplicative::<T>(&ctx.carrier).map_err(invalid);
    }
    if flags.is_empty() {
        let rank = ctx.carrier.as_lattice().expect("lattice").rank();
        let two = vec![T::from_integer(2); rank];
        return Ok(vec![
            MultiplicativeFunction::trivial(&ctx.carrier),
            MultiplicativeFunction::lattice(&ctx.carrier, two).map_err(invalid)?,
        ]);
    }
    flags.iter().map(|s| lattice_character(ctx, "chi", s)).collect()
}

fn characters_json<T: Scalar>(chars: &[MultiplicativeFunction<T>]) -> Value {
    Value::Array(
        chars
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut v = character_json(c);
                insert(&mut v, "index", uint(i));
                v
            })
            .collect(),
    )
}

// ---- commands ----

fn enumerate<T: Scalar>(ctx: &Ctx<'_>, report: &mut Report) -> Result<bool, CliError> {
    let combos = combos::<T>(ctx, false)?;
    type Group<'c, T> = (Option<usize>, InvolutiveAutomorphism, Vec<&'c Combo<T>>);
    let mut sigmas: Vec<Group<'_, T>> = Vec::new();
    for combo in &combos {
        match sigmas.last_mut() {
            Some(last) if last.0 == combo.sigma_index && last.1 == *combo.weight.sigma() => last.2.push(combo),
            _ => sigmas.push((combo.sigma_index, combo.weight.sigma().clone(), vec![combo])),
        }
    }
    let mut inventory = obj([("involutions", uint(sigmas.len()))]);
    if ctx.finite() {
        let chars = characters::<T>(ctx, &[])?;
        report.line(format!("characters: {}", chars.len()));
        for (i, c) in chars.iter().enumerate() {
            report.line(format!("  χ#{i} {}", mu_text(c)));
        }
        insert(&mut inventory, "characters", uint(chars.len()));
        insert(&mut report.json, "characters", characters_json(&chars));
    }
    report.line(format!("involutive automorphisms: {}", sigmas.len()));
    let mut sigma_json = Vec::new();
    for (index, sigma, weights) in &sigmas {
        let label = index.map_or("σ".to_string(), |i| format!("σ#{i}"));
        if ctx.finite() {
            report.line(format!("  {label} {}: {} admissible weights", sigma.describe(), weights.len()));
        } else {
            report.line(format!("  {label} {}", sigma.describe()));
        }
        for w in weights {
            let m = w.mu_index.map_or("μ".to_string(), |i| format!("μ#{i}"));
            report.line(format!("    {m} {}", mu_text(w.weight.mu())));
        }
        let mut entry = obj([
            ("index", opt_index(*index)),
            ("map", text(sigma.describe())),
            ("weights", Value::Array(weights.iter().map(|w| {
                let mut v = character_json(w.weight.mu());
                insert(&mut v, "index", opt_index(w.mu_index));
                v
            }).collect())),
        ]);
        if !ctx.finite() {
            let basis = odd_additive_basis(sigma);
            report.line(format!("    σ-odd additive functions: dimension {}", basis.len()));
            let rows = basis.iter().map(|b| Value::Array(b.iter().map(|&x| json::int(x)).collect())).collect();
            insert(&mut entry, "odd_additive_basis", Value::Array(rows));
        }
        sigma_json.push(entry);
    }
    insert(&mut inventory, "weights", uint(combos.len()));
    insert(&mut report.json, "inventory", inventory);
    insert(&mut report.json, "involutions", Value::Array(sigma_json));
    Ok(true)
}

fn constants_json<T: Scalar>(tag: fneq::FamilyTag, params: &fneq::families::FamilyParams<T>) -> Value {
    let mut v = obj([]);
    for (name, value) in params.constants() {
        insert(&mut v, name, json::scalar(value));
    }
    if let Some(theta) = &params.theta {
        insert(&mut v, "theta", Value::Array(theta.values(Scope::AllPairs).iter().map(json::scalar).collect()));
    }
    if tag.equation() == EquationId::MuSineSubtraction {
        // the alternate convention swaps c1 and c2
        insert(&mut v, "alt_names", obj([("c1", text("c2")), ("c2", text("c1"))]));
    }
    v
}

fn constants_text<T: Scalar>(tag: fneq::FamilyTag, params: &fneq::families::FamilyParams<T>) -> String {
    let swap = tag.equation() == EquationId::MuSineSubtraction;
    let theta = params.theta.as_ref().map(|_| "+θ".to_string());
    params
        .constants()
        .iter()
        .map(|(name, value)| {
            let alt = match (swap, *name) {
                (true, "c1") => "|c2'",
                (true, "c2") => "|c1'",
                _ => "",
            };
            format!("{name}{alt}={}", cx(value.to_complex64()))
        })
        .chain(theta)
        .collect::<Vec<_>>()
        .join(" ")
}

fn families<T: Scalar>(
    ctx: &Ctx<'_>,
    equation: Option<EquationId>,
    chi_flags: &[String],
    report: &mut Report,
) -> Result<bool, CliError> {
    if ctx.finite() && !chi_flags.is_empty() {
        return Err(usage("--chi applies to lattice carriers only"));
    }
    let chars = characters::<T>(ctx, chi_flags)?;
    let combos = combos::<T>(ctx, false)?;
    let config = SweepConfig::<T> { equations: equation.map_or(EquationId::ALL.to_vec(), |e| vec![e]), ..Default::default() };
    insert(&mut report.json, "characters", characters_json(&chars));
    insert(&mut report.json, "inventory", obj([("characters", uint(chars.len())), ("weights", uint(combos.len()))]));
    let tol = ctx.common.tolerance;
    let (mut built, mut failed) = (0usize, 0usize);
    let mut combos_json = Vec::new();
    for combo in &combos {
        report.line(combo.label());
        let entries = sweep(&combo.weight, &chars, &config).map_err(invalid)?;
        let mut rows = Vec::new();
        for e in entries {
            let chi = match (e.chi_index, e.chi2_index) {
                (Some(a), Some(b)) => format!("χ#{a},χ#{b}"),
                (Some(a), None) => format!("χ#{a}"),
                _ => "-".into(),
            };
            let mut row = obj([
                ("tag", text(e.tag.to_string())),
                ("chi", opt_index(e.chi_index)),
                ("chi2", opt_index(e.chi2_index)),
            ]);
            match e.outcome {
                Ok(t) => {
                    let scan = if ctx.finite() { t.scan().clone() } else { t.rescan(ctx.scope).map_err(invalid)? };
                    let ok = scan.passes(tol);
                    built += 1;
                    failed += usize::from(!ok);
                    report.line(format!(
                        "  {:<26} {:<10} {:<10} {:<4} {}",
                        e.tag.to_string(),
                        chi,
                        residual_text(&scan),
                        if ok { "ok" } else { "FAIL" },
                        constants_text(e.tag, t.params())
                    ));
                    insert(&mut row, "status", text(if ok { "ok" } else { "failed" }));
                    insert(&mut row, "residual", scan_json(&scan, ok));
                    insert(&mut row, "params", constants_json(e.tag, t.params()));
                    let warnings = t.warnings().iter().map(|w| text(w.to_string())).collect();
                    insert(&mut row, "warnings", Value::Array(warnings));
                    if ctx.finite() {
                        let mut slots = obj([]);
                        for (s, f) in t.slots().iter() {
                            insert(&mut slots, s.name(), values_json(f, ctx.scope));
                        }
                        insert(&mut row, "slots", slots);
                    }
                }
                Err(err) => {
                    failed += 1;
                    report.line(format!("  {:<26} {:<10} error: {err}", e.tag.to_string(), chi));
                    insert(&mut row, "status", text("error"));
                    insert(&mut row, "error", text(err.to_string()));
                }
            }
            rows.push(row);
        }
        let mut v = combo.json();
        insert(&mut v, "families", Value::Array(rows));
        combos_json.push(v);
    }
    report.line(format!("{built} triples built, {failed} failed"));
    insert(&mut report.json, "combos", Value::Array(combos_json));
    insert(&mut report.json, "summary", obj([("built", uint(built)), ("failed", uint(failed))]));
    Ok(failed == 0)
}

fn nullspace<T: Scalar>(ctx: &Ctx<'_>, report: &mut Report) -> Result<bool, CliError> {
    ctx.require_finite("nullspace")?;
    let mut combos_json = Vec::new();
    for combo in combos::<T>(ctx, false)? {
        let basis = nullspace_basis(&combo.weight).map_err(invalid)?;
        report.line(format!("{}: dimension {}", combo.label(), basis.dimension()));
        for b in basis.basis() {
            let vals: Vec<String> = b.values(ctx.scope).iter().map(|z| cx(z.to_complex64())).collect();
            report.line(format!("  [{}]", vals.join(", ")));
        }
        let mut v = combo.json();
        insert(&mut v, "nullspace_dimension", uint(basis.dimension()));
        insert(&mut v, "basis", Value::Array(basis.basis().iter().map(|b| values_json(b, ctx.scope)).collect()));
        combos_json.push(v);
    }
    insert(&mut report.json, "combos", Value::Array(combos_json));
    Ok(true)
}

fn clause_json(c: &ClauseCheck) -> Value {
    obj([
        ("passed", Value::Bool(c.passed)),
        ("max", json::float(c.max)),
        ("witness", c.witness.clone().map_or(Value::Null, Value::String)),
    ])
}

fn clause_line(name: &str, c: &ClauseCheck) -> String {
    let status = if c.passed { "ok" } else { "FAIL" };
    match &c.witness {
        Some(w) if !c.passed => format!("  {name:<12} {status:<4} max {:.2e} at {w}", c.max),
        _ => format!("  {name:<12} {status:<4} max {:.2e}", c.max),
    }
}

fn verify(ctx: &Ctx<'_>, equation: EquationId, values: &Path, report: &mut Report) -> Result<bool, CliError> {
    ctx.require_finite("verify")?;
    let table = parse_values(&read(values)?, &ctx.file, equation.slots())
        .map_err(|e| invalid(format!("{}: {e}", values.display())))?;
    let mut slots = Slots::new();
    for (s, v) in table {
        slots.insert(s, ScalarFunction::dense(&ctx.carrier, v).map_err(invalid)?);
    }
    let combo = if equation.needs_weight() { combos::<C64>(ctx, true)?.pop() } else { None };
    let weight = combo.as_ref().map(|c| &c.weight);
    if let Some(c) = &combo {
        report.line(c.label());
    }
    let tol = ctx.common.tolerance;
    let scan = max_residual(equation, &slots, weight, ctx.scope).map_err(invalid)?;
    let mut passed = scan.passes(tol);
    report.line(format!(
        "{equation} residual {:.2e}{}: {}",
        scan.max,
        if passed { String::new() } else { format!(" at {}", witness_text(&scan.witness)) },
        if passed { "ok" } else { "FAIL" }
    ));
    insert(&mut report.json, "equation", text(equation.name()));
    insert(&mut report.json, "residual", scan_json(&scan, passed));
    if let Some(c) = &combo {
        let v = c.json();
        insert(&mut report.json, "weight", v);
    }
    if let (EquationId::Main, Some(w)) = (equation, weight) {
        let vanishing = [Slot::G, Slot::H].into_iter().find(|&s| slots.get(s).is_some_and(|f| f.is_zero_on(ctx.scope)));
        if let Some(s) = vanishing {
            report.line(format!("structure checks skipped: {s} vanishes"));
            insert(&mut report.json, "structure", obj([("skipped", text(format!("{s} vanishes")))]));
        } else {
            let r = verify_structure(&slots, w, ctx.scope, tol).map_err(invalid)?;
            report.line("structure:");
            report.line(clause_line("oddness", &r.oddness));
            report.line(clause_line("centrality", &r.centrality));
            report.line(clause_line("sine law", &r.sine_law));
            let branch = match &r.g_branch {
                GBranch::ZeroAtIdentity { b, proportional } => {
                    report.line(clause_line(&format!("g = b·h, b={}", cx(*b)), proportional));
                    obj([("g_at_identity", text("zero")), ("b", json::complex(*b)), ("check", clause_json(proportional))])
                }
                GBranch::NonZeroAtIdentity { companion } => {
                    report.line(clause_line("companion", companion));
                    obj([("g_at_identity", text("nonzero")), ("check", clause_json(companion))])
                }
            };
            insert(
                &mut report.json,
                "structure",
                obj([
                    ("oddness", clause_json(&r.oddness)),
                    ("centrality", clause_json(&r.centrality)),
                    ("sine_law", clause_json(&r.sine_law)),
                    ("g_branch", branch),
                    ("passed", Value::Bool(r.passed())),
                ]),
            );
            passed &= r.passed();
        }
    }
    Ok(passed)
}

fn oracle(ctx: &Ctx<'_>, starts: usize, seed: u64, report: &mut Report) -> Result<bool, CliError> {
    ctx.require_finite("oracle")?;
    insert(&mut report.json, "seed", Value::Number(seed.into()));
    let chars = enumerate_multiplicative::<C64>(&ctx.carrier).map_err(invalid)?;
    let config = OracleConfig::new(starts, seed);
    let tol = ctx.common.tolerance;
    let (mut total, mut unclassified, mut worst) = (0usize, 0usize, 0.0f64);
    let mut combos_json = Vec::new();
    for combo in combos::<C64>(ctx, false)? {
        let r = oracle_solve_main(&combo.weight, &config).map_err(invalid)?;
        report.line(format!(
            "{}: nullspace {}, converged {}/{}, {} solutions, {} unclassified",
            combo.label(),
            r.nullspace_dimension,
            r.converged,
            r.starts,
            r.solutions.len(),
            r.unclassified()
        ));
        total += r.solutions.len();
        unclassified += r.unclassified();
        worst = worst.max(r.max_residual());
        let mut sols = Vec::new();
        for s in &r.solutions {
            let class = match &s.classification {
                Classification::Family { tag, chi, c, c1, c2, fit } => {
                    let index = chars.iter().position(|x| x.same_as(chi));
                    report.line(format!(
                        "  {tag} χ#{} c={} c1={} c2={} fit {fit:.1e} residual {:.1e} hits {}",
                        index.map_or("?".into(), |i| i.to_string()),
                        cx(*c),
                        cx(*c1),
                        cx(*c2),
                        s.scan.max,
                        s.hits
                    ));
                    obj([
                        ("tag", text(tag.to_string())),
                        ("chi", opt_index(index)),
                        ("c", json::complex(*c)),
                        ("c1", json::complex(*c1)),
                        ("c2", json::complex(*c2)),
                        ("fit", json::float(*fit)),
                    ])
                }
                Classification::Unclassified { best_fit } => {
                    report.line(format!("  UNCLASSIFIED best fit {best_fit:.1e} residual {:.1e} hits {}", s.scan.max, s.hits));
                    obj([("tag", text("UNCLASSIFIED")), ("best_fit", json::float(*best_fit))])
                }
            };
            sols.push(obj([
                ("classification", class),
                ("residual", scan_json(&s.scan, s.scan.passes(tol))),
                ("start", uint(s.start)),
                ("hits", uint(s.hits)),
                ("f", values_json(&s.f, ctx.scope)),
                ("g", values_json(&s.g, ctx.scope)),
                ("h", values_json(&s.h, ctx.scope)),
            ]));
        }
        let mut v = combo.json();
        insert(&mut v, "nullspace_dimension", uint(r.nullspace_dimension));
        insert(&mut v, "converged", uint(r.converged));
        insert(&mut v, "unclassified", uint(r.unclassified()));
        insert(&mut v, "solutions", Value::Array(sols));
        combos_json.push(v);
    }
    report.line(format!("{total} solutions, {unclassified} unclassified, max residual {worst:.2e}"));
    insert(&mut report.json, "combos", Value::Array(combos_json));
    insert(
        &mut report.json,
        "oracle",
        obj([
            ("starts", uint(starts)),
            ("solutions", uint(total)),
            ("unclassified", uint(unclassified)),
            ("max_residual", json::float(worst)),
        ]),
    );
    Ok(unclassified == 0 && worst <= tol)
}
