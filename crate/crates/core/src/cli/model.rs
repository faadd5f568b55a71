//! Typed curves and points built from a validated configuration.

use crate::algebra::{
    parse_poly, parse_ratfunc, AlgebraError, ExtField, Field, FieldDescriptor, FunctionField, Poly, PrimeField, Rationals,
};
use crate::curve::{quadratic_twist, CurveBase, CurveError, CurvePoint, TwistData, WeierstrassCurve};

use super::config::{invalid, ConfigError, CurveSpec, FieldSpec, PointSpec, RunConfig};

/// Fields whose elements can be read from configuration strings.
pub trait ParseElem: CurveBase {
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, AlgebraError>;
}

fn constant_of<F: Field>(s: &str, k: &F) -> Result<F::Elem, AlgebraError> {
    let p = parse_poly(s, k)?;
    if !p.is_constant() {
        return Err(AlgebraError::CoefficientNotInField(s.to_string()));
    }
    Ok(p.coeff(0))
}

impl ParseElem for Rationals {
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, AlgebraError> {
        constant_of(s, self)
    }
}

impl ParseElem for PrimeField {
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, AlgebraError> {
        constant_of(s, self)
    }
}

impl ParseElem for ExtField {
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, AlgebraError> {
        Ok(self.reduce(&parse_poly(s, self.base())?))
    }
}

impl<F: Field> ParseElem for FunctionField<F> {
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, AlgebraError> {
        parse_ratfunc(s, self.base())
    }
}

pub(crate) fn parse_const<F: Field>(s: &str, k: &F, name: &str) -> Result<F::Elem, ConfigError> {
    constant_of(s, k).map_err(|e| invalid(name, e))
}

pub(crate) fn parse_in<F: Field>(s: &str, k: &F, name: &str) -> Result<Poly<F>, ConfigError> {
    parse_poly(s, k).map_err(|e| invalid(name, e))
}

/// A curve with its optional points.
#[derive(Clone, Debug)]
pub struct Setup<K: CurveBase> {
    pub curve: WeierstrassCurve<K>,
    pub point: Option<CurvePoint<K>>,
    pub curve2: Option<WeierstrassCurve<K>>,
    pub point2: Option<CurvePoint<K>>,
    pub point_q: Option<CurvePoint<K>>,
}

impl<K: CurveBase> Setup<K> {
    pub fn require_point(&self) -> Result<&CurvePoint<K>, ConfigError> {
        self.point.as_ref().ok_or_else(|| invalid("point", "missing; this command needs a point"))
    }

    /// The second pair, with the curve defaulting to the first one.
    pub fn require_pair2(&self) -> Result<(&WeierstrassCurve<K>, &CurvePoint<K>), ConfigError> {
        let p2 = self.point2.as_ref().ok_or_else(|| invalid("point2", "missing; this command needs a second point"))?;
        Ok((self.curve2.as_ref().unwrap_or(&self.curve), p2))
    }
}

#[derive(Clone, Debug)]
pub enum Model {
    NoCurve,
    Q(Setup<Rationals>),
    Fp(Setup<PrimeField>),
    Ext(Setup<ExtField>),
    QT(Setup<FunctionField<Rationals>>, Option<TwistData<Rationals>>),
    FpT(Setup<FunctionField<PrimeField>>, Option<TwistData<PrimeField>>),
}

fn curve_err(name: &str, e: CurveError) -> ConfigError {
    invalid(name, e)
}

struct Built<K: CurveBase, T> {
    curve: WeierstrassCurve<K>,
    twist: Option<T>,
    canonical_point: Option<CurvePoint<K>>,
}

fn build_plain<K: ParseElem>(k: &K, spec: &CurveSpec, name: &str) -> Result<WeierstrassCurve<K>, ConfigError> {
    let e = |s: &str, key: &str| k.parse_elem(s).map_err(|err| invalid(&format!("{name}.{key}"), err));
    match spec {
        CurveSpec::Short { a, b, .. } => {
            WeierstrassCurve::short(k.clone(), e(a, "a")?, e(b, "b")?).map_err(|err| curve_err(name, err))
        }
        CurveSpec::General(cs) => {
            let keys = ["a1", "a2", "a3", "a4", "a6"];
            let mut coeffs = Vec::with_capacity(5);
            for (c, key) in cs.iter().zip(keys) {
                coeffs.push(e(c, key)?);
            }
            let coeffs: [K::Elem; 5] = coeffs.try_into().map_err(|_| invalid(name, "five coefficients"))?;
            WeierstrassCurve::new(k.clone(), coeffs).map_err(|err| curve_err(name, err))
        }
    }
}

fn build_fn<F: Field>(
    base: &F,
    spec: &CurveSpec,
    name: &str,
) -> Result<Built<FunctionField<F>, TwistData<F>>, ConfigError>
where
    FunctionField<F>: ParseElem,
{
    match spec {
        CurveSpec::Short { a, b, delta: Some(delta) } => {
            let a = parse_const(a, base, &format!("{name}.a"))?;
            let b = parse_const(b, base, &format!("{name}.b"))?;
            let delta = parse_in(delta, base, &format!("{name}.delta"))?;
            let tw = quadratic_twist(a, b, delta).map_err(|e| match e {
                CurveError::BadDelta(r) => invalid(&format!("{name}.delta"), r),
                other => curve_err(name, other),
            })?;
            Ok(Built { curve: tw.curve.clone(), canonical_point: tw.point.clone(), twist: Some(tw) })
        }
        _ => Ok(Built { curve: build_plain(&FunctionField::new(base.clone()), spec, name)?, twist: None, canonical_point: None }),
    }
}

fn build_point<K: ParseElem>(
    curve: &WeierstrassCurve<K>,
    spec: &Option<PointSpec>,
    name: &str,
) -> Result<Option<CurvePoint<K>>, ConfigError> {
    let Some(spec) = spec else { return Ok(None) };
    let k = curve.field();
    let x = k.parse_elem(&spec.x).map_err(|e| invalid(&format!("{name}.x"), e))?;
    let y = k.parse_elem(&spec.y).map_err(|e| invalid(&format!("{name}.y"), e))?;
    let p = CurvePoint::affine(x, y);
    if !curve.on_curve(&p) {
        return Err(invalid(name, "not on the curve"));
    }
    Ok(Some(p))
}

fn setup_plain<K: ParseElem>(k: K, cfg: &RunConfig) -> Result<Setup<K>, ConfigError> {
    let curve = build_plain(&k, cfg.curve.as_ref().expect("checked"), "curve")?;
    let curve2 = cfg.curve2.as_ref().map(|c| build_plain(&k, c, "curve2")).transpose()?;
    let point = build_point(&curve, &cfg.point, "point")?;
    let point2 = build_point(curve2.as_ref().unwrap_or(&curve), &cfg.point2, "point2")?;
    let point_q = build_point(&curve, &cfg.point_q, "point_q")?;
    Ok(Setup { curve, point, curve2, point2, point_q })
}

type FnSetup<F> = (Setup<FunctionField<F>>, Option<TwistData<F>>);

fn setup_fn<F: Field>(base: F, cfg: &RunConfig) -> Result<FnSetup<F>, ConfigError>
where
    FunctionField<F>: ParseElem,
{
    let first = build_fn(&base, cfg.curve.as_ref().expect("checked"), "curve")?;
    let second = cfg.curve2.as_ref().map(|c| build_fn(&base, c, "curve2")).transpose()?;
    let point = build_point(&first.curve, &cfg.point, "point")?.or(first.canonical_point.clone());
    let curve2_ref = second.as_ref().map(|s| &s.curve).unwrap_or(&first.curve);
    let point2 = build_point(curve2_ref, &cfg.point2, "point2")?.or_else(|| second.as_ref().and_then(|s| s.canonical_point.clone()));
    let point_q = build_point(&first.curve, &cfg.point_q, "point_q")?;
    let setup = Setup { curve: first.curve, point, curve2: second.map(|s| s.curve), point2, point_q };
    Ok((setup, first.twist))
}

impl Model {
    /// Effective field: `k(T)` whenever a twist is given, `Q` by default.
    pub fn field_spec(cfg: &RunConfig) -> FieldSpec {
        let twisted = [&cfg.curve, &cfg.curve2].iter().any(|c| c.as_ref().is_some_and(|c| c.delta().is_some()));
        let mut f = cfg.field.clone().unwrap_or(FieldSpec { base: FieldDescriptor::Rationals, function_field: false });
        f.function_field |= twisted;
        f
    }

    pub fn build(cfg: &RunConfig) -> Result<Self, ConfigError> {
        if cfg.curve.is_none() {
            for (present, name) in [
                (cfg.point.is_some(), "point"),
                (cfg.point2.is_some(), "point2"),
                (cfg.point_q.is_some(), "point_q"),
            ] {
                if present {
                    return Err(invalid(name, "given without a [curve]"));
                }
            }
            return Ok(Model::NoCurve);
        }
        let spec = Self::field_spec(cfg);
        let field_err = |e: AlgebraError| invalid("field.descriptor", e);
        Ok(match (&spec.base, spec.function_field) {
            (FieldDescriptor::Rationals, false) => Model::Q(setup_plain(Rationals, cfg)?),
            (FieldDescriptor::PrimeField(_), false) => Model::Fp(setup_plain(spec.base.prime_field().map_err(field_err)?, cfg)?),
            (FieldDescriptor::ExtField { .. }, false) => Model::Ext(setup_plain(spec.base.ext_field().map_err(field_err)?, cfg)?),
            (FieldDescriptor::Rationals, true) => {
                let (s, t) = setup_fn(Rationals, cfg)?;
                Model::QT(s, t)
            }
            (FieldDescriptor::PrimeField(_), true) => {
                let (s, t) = setup_fn(spec.base.prime_field().map_err(field_err)?, cfg)?;
                Model::FpT(s, t)
            }
            (FieldDescriptor::ExtField { .. }, true) => {
                return Err(invalid("field.descriptor", "function fields over GF(p)[T]/(m) are not supported"))
            }
        })
    }

    /// Rewrites field, coefficients and points in canonical printed form.
    pub fn canonicalize_into(&self, cfg: &mut RunConfig) {
        if cfg.curve.is_none() {
            return;
        }
        cfg.field = Some(Self::field_spec(cfg));
        match self {
            Model::NoCurve => {}
            Model::Q(s) => write_setup(s, cfg),
            Model::Fp(s) => write_setup(s, cfg),
            Model::Ext(s) => write_setup(s, cfg),
            Model::QT(s, _) => write_fn_setup(s, cfg),
            Model::FpT(s, _) => write_fn_setup(s, cfg),
        }
    }
}

fn show<K: Field>(k: &K, e: &K::Elem) -> String {
    k.elem_to_string(e)
}

fn write_curve<K: CurveBase>(curve: &WeierstrassCurve<K>, spec: &mut CurveSpec) {
    let k = curve.field();
    let [a1, a2, a3, a4, a6] = curve.coeffs();
    *spec = match spec {
        CurveSpec::Short { .. } => CurveSpec::Short { a: show(k, a4), b: show(k, a6), delta: None },
        CurveSpec::General(_) => CurveSpec::General([a1, a2, a3, a4, a6].map(|c| show(k, c))),
    };
}

fn write_point<K: CurveBase>(k: &K, p: &Option<CurvePoint<K>>, spec: &mut Option<PointSpec>) {
    if let (Some(CurvePoint::Affine { x, y }), Some(s)) = (p, spec.as_mut()) {
        *s = PointSpec { x: show(k, x), y: show(k, y) };
    }
}

fn write_setup<K: CurveBase>(s: &Setup<K>, cfg: &mut RunConfig) {
    write_curve(&s.curve, cfg.curve.as_mut().expect("checked"));
    if let (Some(c), Some(spec)) = (&s.curve2, cfg.curve2.as_mut()) {
        write_curve(c, spec);
    }
    let k = s.curve.field();
    write_point(k, &s.point, &mut cfg.point);
    write_point(k, &s.point2, &mut cfg.point2);
    write_point(k, &s.point_q, &mut cfg.point_q);
}

/// Twists keep their `(a, b, δ)` form; other curves print their coefficients.
fn write_fn_setup<F: Field>(s: &Setup<FunctionField<F>>, cfg: &mut RunConfig) {
    let base = s.curve.field().base().clone();
    let canon = |spec: &mut CurveSpec, curve: &WeierstrassCurve<FunctionField<F>>| match spec {
        CurveSpec::Short { a, b, delta: Some(delta) } => {
            let c = |t: &str| show(&base, &constant_of(t, &base).expect("validated"));
            *a = c(a);
            *b = c(b);
            *delta = parse_poly(delta, &base).expect("validated").to_string();
        }
        _ => write_curve(curve, spec),
    };
    canon(cfg.curve.as_mut().expect("checked"), &s.curve);
    if let (Some(c), Some(spec)) = (&s.curve2, cfg.curve2.as_mut()) {
        canon(spec, c);
    }
    let k = s.curve.field();
    write_point(k, &s.point, &mut cfg.point);
    write_point(k, &s.point2, &mut cfg.point2);
    write_point(k, &s.point_q, &mut cfg.point_q);
}
