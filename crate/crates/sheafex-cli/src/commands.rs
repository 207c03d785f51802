use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::{json, Value};
use sheafex::buildings::{build_an, corollary_bounds, table77, theorem72_bound, thickness, DEFAULT_BUILDING_BUDGET};
use sheafex::catalog::{complete, complete_bipartite, cycle, graph_complex, icosahedron, path, petersen};
use sheafex::codes::{intro_ltc, tester_metrics, SoundnessMethod, TesterOptions, WordSpace, DEFAULT_WORD_BUDGET};
use sheafex::cohomology::{
    cb0, cohomology_spaces, cosystolic_check, theorem_bound_for, Cochain, TheoremBound, DEFAULT_CB0_BUDGET,
};
use sheafex::complex::{complex_from_json, complex_to_json, skeleton, validate_weights, SimpleGraph, WeightedComplex};
use sheafex::scalar::{fmt_rational, parse_rational};
use sheafex::sheaf::{
    check_conditions, check_linear_disjoint, quotient_by_subgroups, AbelianGroup, AugmentedSheaf, Backend, ConditionOptions,
    SheafSpec, Subgroup, SubgroupAssignment,
};
use sheafex::spectral::{check_cheeger_inequality, cheeger_with, eml_check, partite_eml_check, spectrum, DEFAULT_CHEEGER_CAP};
use sheafex::suite::{run_all, run_criterion, SuiteOptions};
use sheafex::{Error, Rational};

use crate::{Command, Common, Family, SheafArgs};

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

const OK: u8 = 0;
const FALSIFIED: u8 = 1;

fn usage(msg: impl Into<String>) -> Box<dyn std::error::Error> {
    msg.into().into()
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn load_complex(path: Option<&PathBuf>) -> CliResult<WeightedComplex> {
    let path = path.ok_or_else(|| usage("--in is required"))?;
    Ok(complex_from_json(&read(path)?)?)
}

/// Spectral commands act on the 1-skeleton with its induced weights.
fn graph_part(x: WeightedComplex) -> CliResult<WeightedComplex> {
    Ok(if x.dimension() > 1 { skeleton(&x, 1)? } else { x })
}

fn parse_group(text: &str) -> CliResult<AbelianGroup> {
    let bad = || usage(format!("bad --group {text:?}; expected gf:p:k or cyclic:m1,m2"));
    let backend = match text.split(':').collect::<Vec<_>>().as_slice() {
        ["gf", p, k] => Backend::Gf { p: p.parse().map_err(|_| bad())?, k: k.parse().map_err(|_| bad())? },
        ["cyclic", m] => Backend::Cyclic {
            moduli: m.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?,
        },
        _ => return Err(bad()),
    };
    Ok(AbelianGroup::new(backend)?)
}

fn load_assignment(x: &WeightedComplex, args: &SheafArgs) -> CliResult<SubgroupAssignment> {
    match &args.sheaf {
        Some(p) => Ok(SubgroupAssignment::from_spec(x, &SheafSpec::from_json(&read(p)?)?)?),
        None => Ok(SubgroupAssignment::zero(x, &parse_group(&args.group)?)),
    }
}

fn rational_arg(name: &str, text: &str) -> CliResult<Rational> {
    parse_rational(text).ok_or_else(|| usage(format!("--{name} must be p/q, got {text:?}")))
}

fn mode_name(c: &Common) -> &'static str {
    match c.mode {
        crate::Mode::Exhaustive => "exhaustive",
        crate::Mode::Sampled => "sampled",
    }
}

fn ids(x: &WeightedComplex, set: &[u32]) -> Vec<String> {
    set.iter().map(|&v| x.complex().vertex_ids()[v as usize].clone()).collect()
}

fn witness_map(s: &AugmentedSheaf, w: &Option<Cochain>) -> Value {
    w.as_ref().map_or(Value::Null, |c| json!(c.to_map(s)))
}

fn bound_json(b: &Result<TheoremBound, Error>) -> Value {
    match b {
        Ok(b) => json!({ "value": b.value, "inputs": b.inputs }),
        Err(e) => json!({ "value": null, "error": e.to_string() }),
    }
}

/// Coordinates as one string: digits run together below 10, comma-separated otherwise.
fn word_text(v: &[u32]) -> String {
    let sep = if v.iter().all(|&d| d < 10) { "" } else { "," };
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(sep)
}

fn result_json<T: serde::Serialize>(r: Result<T, Error>) -> Value {
    r.map_or_else(|e| json!({ "error": e.to_string() }), |v| json!(v))
}

fn opt_rational(r: &Option<Rational>) -> Value {
    r.as_ref().map_or(Value::Null, |r| json!(fmt_rational(r)))
}

pub fn run(cmd: Command) -> CliResult<ExitCode> {
    let code = match cmd {
        Command::Gen { family, n, m, partite, common } => gen(family, n, m, partite, &common)?,
        Command::Validate { common } => validate(&common)?,
        Command::Spectral { common } => spectral(&common)?,
        Command::Cheeger { common } => cheeger_cmd(&common)?,
        Command::Eml { partite, common } => eml(partite, &common)?,
        Command::Sheaf { sheaf, common } => sheaf_cmd(&sheaf, &common)?,
        Command::Cb0 { sheaf, common } => cb0_cmd(&sheaf, &common)?,
        Command::Cosys { sheaf, epsilon, delta, common } => cosys(&sheaf, epsilon, delta, &common)?,
        Command::Building { kind, n, q, table, report, common } => building(&kind, n, q, table, report, &common)?,
        Command::Ltc { graph, m, report, alphabet_words, common } => ltc(graph, m, report, alphabet_words, &common)?,
        Command::Table77 { common } => table(&common)?,
        Command::Suite { quick, only, common } => suite(quick, only, &common)?,
    };
    Ok(ExitCode::from(code))
}

fn gen(family: Family, n: u32, m: u32, partite: bool, c: &Common) -> CliResult<u8> {
    let g = match family {
        Family::Complete => complete(n),
        Family::Path => path(n),
        Family::Cycle => cycle(n),
        Family::CompleteBipartite => complete_bipartite(n, m),
        Family::Icosahedron => icosahedron(),
        Family::Petersen => petersen(),
    };
    let x = if partite { sheafex::catalog::bipartite_complex(&g)? } else { graph_complex(&g)? };
    write_out(c.out.as_ref(), &complex_to_json(&x))?;
    Ok(OK)
}

fn validate(c: &Common) -> CliResult<u8> {
    let x = load_complex(c.input.as_ref())?;
    let rep = validate_weights(&x);
    let v = json!({ "valid": rep.is_valid(), "violations": rep.violations, "seed": c.seed });
    write_out(c.out.as_ref(), &pretty(&v))?;
    Ok(if rep.is_valid() { OK } else { FALSIFIED })
}

fn spectral(c: &Common) -> CliResult<u8> {
    let x = graph_part(load_complex(c.input.as_ref())?)?;
    let s = spectrum(&x)?;
    let outside = s.eigenvalues.iter().any(|e| e.abs() > 1.0 + c.tolerance);
    let mut v = json!({
        "eigenvalues": s.eigenvalues,
        "lambda": s.lambda,
        "interval_circ": s.interval_circ,
        "interval_diamond": s.interval_diamond,
        "residual_max": s.residuals.iter().copied().fold(0.0, f64::max),
        "spectrum_in_unit_interval": !outside,
        "seed": c.seed,
    });
    // an over-budget Cheeger search should not hide the spectrum
    let extra = match cheeger_with(&x, c.subset_mode(), c.budget.map_or(DEFAULT_CHEEGER_CAP, |b| b as usize)) {
        Ok(ch) => json!({
            "h": fmt_rational(&ch.h),
            "h_prime": fmt_rational(&ch.h_prime),
            "cheeger_exact": ch.exact,
            "witness": ids(&x, &ch.witness_h),
            "witness_h_prime": ids(&x, &ch.witness_h_prime),
        }),
        Err(e) => json!({ "h": null, "h_prime": null, "witness": null, "cheeger_error": e.to_string() }),
    };
    if let (Value::Object(m), Value::Object(more)) = (&mut v, extra) {
        m.extend(more);
    }
    write_out(c.out.as_ref(), &pretty(&v))?;
    Ok(if outside { FALSIFIED } else { OK })
}

fn cheeger_cmd(c: &Common) -> CliResult<u8> {
    let x = graph_part(load_complex(c.input.as_ref())?)?;
    let ch = cheeger_with(&x, c.subset_mode(), c.budget.map_or(DEFAULT_CHEEGER_CAP, |b| b as usize))?;
    let ineq = if ch.exact { Some(check_cheeger_inequality(&x, c.tolerance)?) } else { None };
    let holds = ineq.as_ref().is_none_or(|r| r.holds);
    let v = json!({
        "mode": mode_name(c),
        "h": fmt_rational(&ch.h),
        "h_prime": fmt_rational(&ch.h_prime),
        "upper_bound_only": !ch.exact,
        "witness": { "h": ids(&x, &ch.witness_h), "h_prime": ids(&x, &ch.witness_h_prime) },
        "inequalities": ineq,
        "tolerance": c.tolerance,
        "seed": c.seed,
    });
    write_out(c.out.as_ref(), &pretty(&v))?;
    Ok(if holds { OK } else { FALSIFIED })
}

fn eml(partite: bool, c: &Common) -> CliResult<u8> {
    let x = graph_part(load_complex(c.input.as_ref())?)?;
    let rep = if partite {
        partite_eml_check(&x, c.subset_mode(), c.tolerance)?
    } else {
        eml_check(&x, c.subset_mode(), c.tolerance)?
    };
    let pair = |p: &Option<(Vec<u32>, Vec<u32>)>| p.as_ref().map(|(a, b)| json!([ids(&x, a), ids(&x, b)]));
    let v = json!({
        "report": rep,
        "witness_i": pair(&rep.worst_pair_i),
        "witness_ii": pair(&rep.worst_pair_ii),
        "seed": c.seed,
    });
    write_out(c.out.as_ref(), &pretty(&v))?;
    Ok(if rep.holds { OK } else { FALSIFIED })
}

fn sheaf_cmd(args: &SheafArgs, c: &Common) -> CliResult<u8> {
    let x = load_complex(c.input.as_ref())?;
    let a = load_assignment(&x, args)?;
    let budget = c.budget_or(DEFAULT_CB0_BUDGET);
    let opts = ConditionOptions { max_cycle_len: c.max_cycle_len, budget };
    let cond = check_conditions(&x, &a, opts)?;
    let s = quotient_by_subgroups(&x, &a)?;
    let h = cohomology_spaces(&s, budget)?;
    let vertex: Vec<&Subgroup> = a.vertex.iter().collect();
    let disjoint = check_linear_disjoint(a.ambient(), &vertex, budget)?;
    let orders: Vec<u64> = (0..s.num_vertices()).map(|v| s.vertex_order(v)).collect();
    let v = json!({
        "conditions": cond,
        "vertex_subgroups_disjoint": disjoint,
        "cohomology": h,
        "vertex_group_orders": orders,
        "spec": a.to_spec(&x),
        "seed": c.seed,
    });
    write_out(c.out.as_ref(), &pretty(&v))?;
    Ok(OK)
}

fn cb0_cmd(args: &SheafArgs, c: &Common) -> CliResult<u8> {
    let x = load_complex(c.input.as_ref())?;
    let a = load_assignment(&x, args)?;
    let budget = c.budget_or(DEFAULT_CB0_BUDGET);
    let s = quotient_by_subgroups(&x, &a)?;
    let res = cb0(&s, c.subset_mode(), budget)?;
    let bound = theorem_bound_for(&x, &a, budget);
    // the bound is only claimed when both sheaf conditions hold
    let opts = ConditionOptions { max_cycle_len: c.max_cycle_len, budget };
    let applies = check_conditions(&x, &a, opts).map(|r| r.holds()).unwrap_or(false);
    let falsified = !res.upper_bound_only
        && applies
        && matches!(&bound, Ok(b) if b.value > 0.0 && res.value.to_f64() < b.value);
    let v = json!({
        "mode": mode_name(c),
        "cb0": res.value,
        "upper_bound_only": res.upper_bound_only,
        "witness": {
            "cochain": witness_map(&s, &res.witness),
            "coboundary_norm": opt_rational(&res.witness_coboundary_norm),
            "distance": opt_rational(&res.witness_distance),
        },
        "cochains_visited": res.cochains_visited.to_string(),
        "theorem_bound": bound_json(&bound),
        "theorem_applies": applies,
        "seed": c.seed,
    });
    write_out(c.out.as_ref(), &pretty(&v))?;
    Ok(if falsified { FALSIFIED } else { OK })
}

fn cosys(args: &SheafArgs, epsilon: Option<String>, delta: Option<String>, c: &Common) -> CliResult<u8> {
    let x = load_complex(c.input.as_ref())?;
    let a = load_assignment(&x, args)?;
    let budget = c.budget_or(DEFAULT_CB0_BUDGET);
    let s = quotient_by_subgroups(&x, &a)?.deaugmented()?;
    let eps = match &epsilon {
        Some(t) => rational_arg("epsilon", t)?,
        None => Rational::from_integer(0.into()),
    };
    let eta = x.vertex_weights().iter().max().cloned().unwrap_or_default();
    let del = match &delta {
        Some(t) => rational_arg("delta", t)?,
        None => Rational::from_integer(1.into()) - &eta,
    };
    let rep = cosystolic_check(&s, &eps, &del, c.subset_mode(), budget)?;
    let v = json!({
        "mode": mode_name(c),
        "upper_bound_only": rep.upper_bound_only,
        "epsilon": fmt_rational(&rep.epsilon),
        "delta": fmt_rational(&rep.delta),
        "eta": fmt_rational(&eta),
        "c1_holds": rep.c1_holds,
        "c2_holds": rep.c2_holds,
        "epsilon_max": rep.epsilon_max,
        "delta_max": fmt_rational(&rep.delta_max),
        "c2_vacuous": rep.c2_vacuous,
        "c1_witness": witness_map(&s, &rep.c1_witness),
        "c2_witness": witness_map(&s, &rep.c2_witness),
        "z0_order": rep.z0_order.to_string(),
        "b0_order": rep.b0_order.to_string(),
        "seed": c.seed,
    });
    write_out(c.out.as_ref(), &pretty(&v))?;
    Ok(if rep.holds() { OK } else { FALSIFIED })
}

fn table_csv() -> CliResult<String> {
    let mut out = String::from("dimension,diagram,m,s_elided,formula,threshold,value_at_threshold,value_below_threshold\n");
    for r in table77()? {
        let below = r.value_below_threshold.map_or(String::new(), |v| format!("{v:.6}"));
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{}\n",
            r.dimension, r.diagram, r.m, r.s_elided, r.formula, r.threshold, r.value_at_threshold, below
        ));
    }
    Ok(out)
}

fn building(kind: &str, n: usize, q: u32, table: Option<String>, report: Option<PathBuf>, c: &Common) -> CliResult<u8> {
    if let Some(t) = table {
        if t != "example77" {
            return Err(usage(format!("unknown table {t:?}; the only table is example77")));
        }
        write_out(c.out.as_ref(), &table_csv()?)?;
        return Ok(OK);
    }
    if !kind.eq_ignore_ascii_case("a") {
        return Err(usage(format!("only type A buildings are generated, not {kind:?}")));
    }
    let x = build_an(q, n, c.budget_or(DEFAULT_BUILDING_BUDGET))?;
    let thick = thickness(&x);
    let r = n as u32 - 1;
    // the spectral bound and both corollaries consume the thickness
    let lam = theorem72_bound(thick, r, 3);
    let cor = corollary_bounds(thick, r, 3);
    let spec = spectrum(&graph_part(x.clone())?)?;
    let v = json!({
        "type": format!("A{n}"),
        "field_order": q,
        "thickness": thick,
        "formula_input": "thickness",
        "vertices": x.num_vertices(),
        "top_faces": x.complex().top_faces().len(),
        "theorem72_lambda": result_json(lam),
        "corollary_bounds": result_json(cor),
        "interval_diamond": spec.interval_diamond,
        "seed": c.seed,
    });
    write_out(c.out.as_ref(), &complex_to_json(&x))?;
    match (&report, &c.out) {
        (Some(p), _) => write_out(Some(p), &pretty(&v))?,
        // with the complex on stdout the report would garble it
        (None, None) => {}
        (None, Some(_)) => write_out(None, &pretty(&v))?,
    }
    Ok(OK)
}

fn ltc(graph: Option<PathBuf>, m: usize, report: Option<PathBuf>, alphabet_words: bool, c: &Common) -> CliResult<u8> {
    let x = load_complex(graph.as_ref().or(c.input.as_ref()))?;
    let budget = c.budget_or(DEFAULT_WORD_BUDGET);
    let l = intro_ltc(&x, m, budget)?;
    let word_space = if alphabet_words { WordSpace::Alphabet } else { WordSpace::Product };
    let rep = tester_metrics(&l.code, TesterOptions { mode: c.subset_mode(), word_space, budget })?;
    let soundness = match (&rep.soundness, rep.upper_bound_only) {
        (s, false) => json!(s),
        (s, true) => json!({ "upper_bound": s }),
    };
    let method = match rep.method {
        SoundnessMethod::Exhaustive => "exhaustive",
        SoundnessMethod::Structural => "structural",
        SoundnessMethod::Sampled { .. } => "sampled",
    };
    let eta = x.vertex_weights().iter().max().cloned().unwrap_or_default();
    let one_minus_eta = Rational::from_integer(1.into()) - &eta;
    let claim = l.theorem_claim.value;
    let claimed = l.conditions.holds() && claim > 0.0;
    let falsified = (!rep.upper_bound_only && claimed && rep.soundness.to_f64() < claim)
        || rep.distance.as_ref().is_some_and(|d| l.conditions.holds() && *d < one_minus_eta);
    let g = SimpleGraph::from_complex(&x)?;
    let v = json!({
        "rate": rep.rate,
        "distance": opt_rational(&rep.distance),
        "soundness": soundness,
        "theorem_claim": { "value": claim, "inputs": l.theorem_claim.inputs, "applies": claimed },
        "method": method,
        "word_space": if alphabet_words { "alphabet" } else { "product" },
        "code_size": rep.code_size,
        "alphabet_order": rep.alphabet_order,
        "degree": l.degree,
        "n": g.n(),
        "m": l.m,
        "conditions_hold": l.conditions.holds(),
        "one_minus_eta": fmt_rational(&one_minus_eta),
        "witness": {
            "word": rep.witness.as_ref().map(|w| w.iter().map(|v| word_text(v)).collect::<Vec<_>>()),
            "rejection": opt_rational(&rep.witness_rejection),
            "distance": opt_rational(&rep.witness_distance),
        },
        "words_visited": rep.words_visited.to_string(),
        "seed": c.seed,
    });
    write_out(report.as_ref().or(c.out.as_ref()), &pretty(&v))?;
    Ok(if falsified { FALSIFIED } else { OK })
}

fn table(c: &Common) -> CliResult<u8> {
    write_out(c.out.as_ref(), &table_csv()?)?;
    Ok(OK)
}

fn suite(quick: bool, only: Option<u8>, c: &Common) -> CliResult<u8> {
    let opts = SuiteOptions { seed: c.seed, quick };
    let outcomes = match only {
        Some(id) => vec![run_criterion(id, opts).ok_or_else(|| usage(format!("no criterion {id}")))?],
        None => run_all(opts),
    };
    for o in &outcomes {
        eprintln!("{o}");
    }
    let all = outcomes.iter().all(|o| o.pass);
    let v = json!({ "criteria": outcomes, "all_pass": all, "quick": quick, "seed": c.seed });
    write_out(c.out.as_ref(), &pretty(&v))?;
    Ok(if all { OK } else { FALSIFIED })
}
