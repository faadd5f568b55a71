use thiserror::Error;

use crate::algebra::{enumerate_irreducibles, necklace_count, parse_ratfunc, AlgebraError, Rationals};
use crate::curve::{CurveBase, CurvePoint};
use crate::eds::{
    diagonal_grid, division_poly_crosscheck, divisibility_check, eds_sequence, gcd_table, gm_gcd_scan, growth_ratios,
    lemma1_check, square_grid, stability_from_rows, EdsBase, EdsError,
};
use crate::ffexp::{
    classify_primes, count_points, lower_bound_experiment, ppower_check, trace_sequence, FfError, TwistSpec,
};

use super::config::{invalid, ConfigError, CurveSpec, Grid, RunConfig};
use super::model::{Model, Setup};
use super::report::{Assertion, Cell, Report, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    CurveInfo,
    EdsSeq,
    GcdTable,
    Stability,
    Lemma1,
    Divisibility,
    DivpolyCheck,
    GmGcd,
    FfClassify,
    FfLowerbound,
    FfPpower,
    CountPoints,
}

impl Command {
    pub fn name(self) -> String {
        use clap::ValueEnum;
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

impl std::str::FromStr for Command {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as clap::ValueEnum>::from_str(s, false).map_err(|_| RunError::UnknownCommand(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown command '{0}'")]
    UnknownCommand(String),
    #[error("{0}")]
    Math(String),
}

impl From<EdsError> for RunError {
    fn from(e: EdsError) -> Self {
        RunError::Math(e.to_string())
    }
}

impl From<AlgebraError> for RunError {
    fn from(e: AlgebraError) -> Self {
        RunError::Math(e.to_string())
    }
}

impl From<FfError> for RunError {
    fn from(e: FfError) -> Self {
        RunError::Math(e.to_string())
    }
}

#[derive(Default)]
struct Body {
    table: Table,
    summary: Option<Table>,
    notes: Vec<(String, String)>,
    assertions: Vec<Assertion>,
}

impl Body {
    fn new(columns: &[&str]) -> Self {
        Self { table: Table::new(columns), ..Default::default() }
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    fn check(&mut self, name: &str, passed: bool) {
        self.assertions.push(Assertion { name: name.to_string(), passed });
    }
}

fn list(values: &[u64]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn curve_info<K: CurveBase>(s: &Setup<K>) -> Body {
    let mut b = Body::new(&["key", "value"]);
    let k = s.curve.field();
    let show = |e: &K::Elem| k.elem_to_string(e);
    let names = ["a1", "a2", "a3", "a4", "a6"];
    for (name, c) in names.iter().zip(s.curve.coeffs()) {
        b.table.push(vec![(*name).into(), show(c).into()]);
    }
    let inv = s.curve.invariants();
    for (name, v) in [
        ("b2", &inv.b2),
        ("b4", &inv.b4),
        ("b6", &inv.b6),
        ("b8", &inv.b8),
        ("c4", &inv.c4),
        ("discriminant", &inv.discriminant),
        ("j", &inv.j),
    ] {
        b.table.push(vec![name.into(), show(v).into()]);
    }
    b.table.push(vec!["constant_j".into(), inv.constant_j.to_string().into()]);
    if let Some(CurvePoint::Affine { x, y }) = &s.point {
        b.table.push(vec!["point".into(), format!("({}, {})", show(x), show(y)).into()]);
        b.check("point_on_curve", s.curve.on_curve(s.point.as_ref().expect("present")));
    }
    b
}

fn eds_seq<K: EdsBase>(s: &Setup<K>, cfg: &RunConfig) -> Result<Body, RunError> {
    let n_max = cfg.params.n_max.unwrap_or(10);
    let entries = eds_sequence(&s.curve, s.require_point()?, n_max)?;
    let mut b = Body::new(&["n", "size", "size_over_n2", "d", "a"]);
    let ratios = growth_ratios(&entries, 1..=n_max);
    for (e, (_, _, ratio)) in entries.iter().zip(ratios) {
        b.table.push(vec![e.n.into(), e.size.into(), ratio.into(), e.d.to_string().into(), e.a.to_string().into()]);
    }
    b.note("size_unit", K::SIZE_UNIT);
    Ok(b)
}

fn gcd_rows<K: EdsBase>(s: &Setup<K>, grid: &[(u64, u64)]) -> Result<Vec<crate::eds::GcdRow<K>>, RunError> {
    let (e2, p2) = s.require_pair2()?;
    Ok(gcd_table(&s.curve, s.require_point()?, e2, p2, grid)?)
}

fn gcd_table_cmd<K: EdsBase>(s: &Setup<K>, cfg: &RunConfig) -> Result<Body, RunError> {
    let n_max = cfg.params.n_max.unwrap_or(6);
    let grid = match cfg.params.grid.unwrap_or_default() {
        Grid::Square => square_grid(n_max),
        Grid::Diagonal => diagonal_grid(n_max),
    };
    let mut b = Body::new(&["n1", "n2", "deg_gcd", "gcd"]);
    for r in gcd_rows(s, &grid)? {
        b.table.push(vec![r.n1.into(), r.n2.into(), r.size.into(), r.g.to_string().into()]);
    }
    b.note("size_unit", K::SIZE_UNIT);
    Ok(b)
}

fn stability_cmd<K: EdsBase>(s: &Setup<K>, cfg: &RunConfig) -> Result<Body, RunError> {
    let n_max = cfg.params.n_max.unwrap_or(12);
    let report = stability_from_rows(gcd_rows(s, &diagonal_grid(n_max))?, n_max);
    let mut b = Body::new(&["n", "deg_gcd", "gcd", "stable"]);
    for r in &report.rows {
        b.table.push(vec![r.n1.into(), r.size.into(), r.g.to_string().into(), (r.g == report.baseline.g).into()]);
    }
    b.note("size_unit", K::SIZE_UNIT);
    b.note("baseline_gcd", &report.baseline.g);
    b.note("stable_set", list(&report.stable_set));
    b.note("exceptional_set", list(&report.exceptional_set));
    b.note("consistent_modulus", report.modulus_estimate.map_or("none".to_string(), |m| m.to_string()));
    Ok(b)
}

fn lemma1_cmd<K: EdsBase>(s: &Setup<K>, cfg: &RunConfig) -> Result<Body, RunError> {
    let m_max = cfg.params.m_max.unwrap_or(6);
    let bound = cfg.params.search_bound.unwrap_or(12);
    let report = lemma1_check(&s.curve, s.require_point()?, m_max, bound)?;
    let mut b = Body::new(&["m", "size", "divides", "cofactor_coprime"]);
    for r in &report.rows {
        b.table.push(vec![r.m.into(), r.size.into(), r.divides.into(), r.cofactor_coprime.into()]);
    }
    b.note("n0", report.n0);
    b.note("d_r", &report.d_r);
    b.check("same_multiplicity", report.all_pass());
    Ok(b)
}

fn divisibility_cmd<K: EdsBase>(s: &Setup<K>, cfg: &RunConfig) -> Result<Body, RunError> {
    let report = divisibility_check(&s.curve, s.require_point()?, cfg.params.n_max.unwrap_or(12))?;
    let mut b = Body::new(&["m", "n", "divides"]);
    for &(m, n, ok) in &report.rows {
        b.table.push(vec![m.into(), n.into(), ok.into()]);
    }
    b.check("divisibility", report.counterexamples().is_empty());
    Ok(b)
}

fn divpoly_cmd<K: CurveBase>(s: &Setup<K>, cfg: &RunConfig) -> Result<Body, RunError> {
    let rows = division_poly_crosscheck(&s.curve, s.require_point()?, cfg.params.n_max.unwrap_or(10))?;
    let k = s.curve.field();
    let mut b = Body::new(&["n", "x_divpoly", "x_group", "agree"]);
    for r in &rows {
        b.table.push(vec![
            r.n.into(),
            k.elem_to_string(&r.x_divpoly).into(),
            k.elem_to_string(&r.x_group).into(),
            r.agree.into(),
        ]);
    }
    b.check("division_polynomials_agree", rows.iter().all(|r| r.agree));
    Ok(b)
}

fn gm_cmd(cfg: &RunConfig) -> Result<Body, RunError> {
    let (a, b_text) = cfg.gm.as_ref().ok_or_else(|| invalid("gm", "missing [gm] section"))?;
    let a = parse_ratfunc(a, &Rationals).map_err(|e| invalid("gm.a", e))?;
    let bb = parse_ratfunc(b_text, &Rationals).map_err(|e| invalid("gm.b", e))?;
    let report = gm_gcd_scan(&a, &bb, cfg.params.n_max.unwrap_or(12))?;
    let mut b = Body::new(&["n", "deg_gcd", "gcd", "equals_base"]);
    for r in &report.rows {
        b.table.push(vec![r.n.into(), r.g.deg_or_zero().into(), r.g.to_string().into(), r.equals_base.into()]);
    }
    let mut order = Table::new(&["m", "gcd", "coprime"]);
    for r in &report.order_rows {
        order.push(vec![r.m.into(), r.g.to_string().into(), r.coprime.into()]);
    }
    b.summary = Some(order);
    b.note("base_gcd", &report.base);
    b.note("degenerate", report.degenerate);
    b.check("order_stability", report.order_rows.iter().all(|r| r.coprime));
    Ok(b)
}

fn twist_spec(model: &Model) -> Result<TwistSpec, RunError> {
    let Model::FpT(s, Some(tw)) = model else {
        return Err(invalid("curve", "this command needs a twist (a, b, delta) over GF(p)").into());
    };
    let p = tw.delta.field().modulus();
    let point = s.point.clone().ok_or_else(|| invalid("point", "missing, and delta is not T^3 + aT + b"))?;
    Ok(TwistSpec::with_points(p, tw.a, tw.b, tw.delta.clone(), point, s.point_q.clone())?)
}

fn classify_cmd(spec: &TwistSpec, cfg: &RunConfig) -> Result<Body, RunError> {
    let degree = cfg.params.big_n.unwrap_or(1);
    let classes = classify_primes(spec, degree, cfg.guards.enumeration)?;
    let (_, a1) = count_points(spec.a, spec.b, spec.p)?;
    let a_n = trace_sequence(a1, spec.p, degree)?.get(degree);
    let qn = (spec.p as i128).pow(degree as u32);
    let mut b = Body::new(&["pi", "deg_pi", "legendre", "class", "n_pi"]);
    let mut rows: Vec<(String, Vec<Cell>)> = Vec::new();
    for (class, members, l) in [("+", &classes.splus, 1i128), ("-", &classes.sminus, -1)] {
        for pi in members {
            let n_pi = qn + 1 - l * a_n;
            let row = vec![pi.to_string().into(), degree.into(), (l as i64).into(), class.into(), n_pi.into()];
            rows.push((pi.to_string(), row));
        }
    }
    for (pi, reason) in &classes.excluded {
        let row = vec![pi.to_string().into(), degree.into(), 0i64.into(), format!("excluded: {reason}").into(), "".into()];
        rows.push((pi.to_string(), row));
    }
    let order = enumerate_irreducibles(spec.field(), degree, cfg.guards.enumeration)?;
    rows.sort_by_key(|(name, _)| order.iter().position(|p| &p.to_string() == name));
    for (_, row) in rows {
        b.table.push(row);
    }
    b.note("splus", classes.splus.len());
    b.note("sminus", classes.sminus.len());
    b.note("excluded", classes.excluded.len());
    b.note("expected_class_size", format!("{:.6}", classes.expected_class_size(spec.p)));
    b.check("partition_matches_necklace_count", classes.total() as u128 == necklace_count(spec.p, degree));
    let hasse = |n: i128| {
        let t = qn + 1 - n;
        t * t <= 4 * qn
    };
    b.check("hasse_interval", hasse(qn + 1 - a_n) && hasse(qn + 1 + a_n));
    Ok(b)
}

fn lowerbound_cmd(spec: &TwistSpec, cfg: &RunConfig) -> Result<Body, RunError> {
    let degree = cfg.params.big_n.unwrap_or(1);
    let reports = lower_bound_experiment(spec, degree, cfg.guards.enumeration)?;
    let mut b = Body::new(&["N", "sign", "n", "pi", "deg_pi", "legendre", "n_pi", "annihilates_P", "annihilates_Q"]);
    let mut summary = Table::new(&["sum_deg", "n", "half_n", "half_qN"]);
    for r in &reports {
        for row in &r.rows {
            b.table.push(vec![
                degree.into(),
                r.sign.to_string().into(),
                r.n.into(),
                row.pi.to_string().into(),
                row.degree.into(),
                row.legendre.into(),
                row.n_pi.into(),
                row.annihilates_p.into(),
                row.annihilates_q.into(),
            ]);
        }
        summary.push(vec![r.sum_deg.into(), r.n.into(), r.half_n().into(), r.half_qn().into()]);
        let tag = format!("{}{}", if r.sign.legendre() > 0 { "plus" } else { "minus" }, r.n);
        b.note(&format!("floor_{tag}"), format!("{:.6}", r.floor()));
        b.note(&format!("ratio_sum_over_n_{tag}"), format!("{:.6}", r.ratio()));
        b.note(&format!("excluded_{tag}"), r.excluded.iter().map(|(p, why)| format!("{p} ({why})")).collect::<Vec<_>>().join("; "));
        b.check(&format!("annihilation_{tag}"), r.annihilation_holds());
        b.check(&format!("floor_{tag}"), r.floor_holds());
        b.check(&format!("hasse_{tag}"), r.hasse_holds());
    }
    b.summary = Some(summary);
    b.note("q_status", if spec.q_is_double { "corollary (Q = 2P)" } else { "independent input" });
    Ok(b)
}

fn ppower_cmd(spec: &TwistSpec, cfg: &RunConfig) -> Result<Body, RunError> {
    let base_n = cfg.params.base_n.unwrap_or(3);
    let i = cfg.params.i.unwrap_or(1);
    let r = ppower_check(spec, base_n, i, cfg.guards.degree)?;
    let mut b = Body::new(&["base_n", "i", "n", "deg_base", "deg_power", "bound", "holds", "vacuous"]);
    b.table.push(vec![
        r.base_n.into(),
        r.i.into(),
        r.n.into(),
        r.deg_base.into(),
        r.deg_power.into(),
        r.bound.into(),
        r.holds.into(),
        r.vacuous.into(),
    ]);
    b.note("base_gcd", &r.base_gcd);
    b.note("power_gcd", &r.power_gcd);
    b.check("ppower_bound", r.holds);
    Ok(b)
}

fn count_cmd(cfg: &RunConfig) -> Result<Body, RunError> {
    let field = Model::field_spec(cfg);
    let k = field.base.prime_field().map_err(|_| invalid("field.descriptor", "count-points needs GF(p)"))?;
    let Some(CurveSpec::Short { a, b: b_text, .. }) = &cfg.curve else {
        return Err(invalid("curve", "count-points needs a short curve y^2 = x^3 + ax + b").into());
    };
    let c = |s: &str, name: &str| super::model::parse_const(s, &k, name);
    let (a, bb) = (c(a, "curve.a")?, c(b_text, "curve.b")?);
    let p = k.modulus();
    let (count, a1) = count_points(a, bb, p)?;
    let mut b = Body::new(&["p", "a", "b", "count", "a1"]);
    b.table.push(vec![p.into(), a.into(), bb.into(), count.into(), a1.into()]);
    if let Some(n_max) = cfg.params.big_n {
        let mut traces = Table::new(&["N", "a_N"]);
        match trace_sequence(a1, p, n_max) {
            Ok(t) => {
                for (n, v) in t.values.iter().enumerate() {
                    traces.push(vec![n.into(), (*v).into()]);
                }
                b.check("hasse", true);
            }
            Err(FfError::HasseViolation { .. }) => b.check("hasse", false),
            Err(e) => return Err(e.into()),
        }
        b.summary = Some(traces);
    }
    Ok(b)
}

macro_rules! eds_dispatch {
    ($model:expr, $f:ident, $cfg:expr) => {
        match $model {
            Model::Q(s) => $f(s, $cfg),
            Model::QT(s, _) => $f(s, $cfg),
            Model::FpT(s, _) => $f(s, $cfg),
            Model::NoCurve => Err(invalid("curve", "missing").into()),
            _ => Err(invalid("field.descriptor", "this command needs Q, Q(T) or GF(p)(T)").into()),
        }
    };
}

macro_rules! any_dispatch {
    ($model:expr, |$s:ident| $body:expr) => {
        match $model {
            Model::Q($s) => $body,
            Model::Fp($s) => $body,
            Model::Ext($s) => $body,
            Model::QT($s, _) => $body,
            Model::FpT($s, _) => $body,
            Model::NoCurve => Err(invalid("curve", "missing").into()),
        }
    };
}

pub fn run_command(cfg: &RunConfig, command: Command) -> Result<Report, RunError> {
    let model = Model::build(cfg)?;
    log::info!("running {}", command.name());
    let body = match command {
        Command::CurveInfo => any_dispatch!(&model, |s| Ok(curve_info(s))),
        Command::EdsSeq => eds_dispatch!(&model, eds_seq, cfg),
        Command::GcdTable => eds_dispatch!(&model, gcd_table_cmd, cfg),
        Command::Stability => eds_dispatch!(&model, stability_cmd, cfg),
        Command::Lemma1 => eds_dispatch!(&model, lemma1_cmd, cfg),
        Command::Divisibility => eds_dispatch!(&model, divisibility_cmd, cfg),
        Command::DivpolyCheck => any_dispatch!(&model, |s| divpoly_cmd(s, cfg)),
        Command::GmGcd => gm_cmd(cfg),
        Command::FfClassify => classify_cmd(&twist_spec(&model)?, cfg),
        Command::FfLowerbound => lowerbound_cmd(&twist_spec(&model)?, cfg),
        Command::FfPpower => ppower_cmd(&twist_spec(&model)?, cfg),
        Command::CountPoints => count_cmd(cfg),
    }?;
    let mut report = Report {
        command: command.name(),
        config_digest: cfg.digest(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        table: body.table,
        summary: body.summary,
        notes: body.notes,
        assertions: body.assertions,
    };
    let digest = report.rows_digest();
    if let Some(expected) = &cfg.rows_digest {
        report.assertions.push(Assertion { name: "rows_digest".into(), passed: *expected == digest });
    }
    report.notes.push(("rows_digest".into(), digest));
    log::info!("{} finished: {} rows", command.name(), report.table.rows.len());
    Ok(report)
}
