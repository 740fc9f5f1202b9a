use super::expr::{parse_sexpr, Expr};
use super::fields::ChartField;
use crate::exact_algebra::rational_to_f64;
use crate::lie_core::{BianchiType, CatalogEntry};
use crate::{Error, Result};
use rand::Rng;
use std::collections::BTreeMap;

/// Reference to a generator of the enlarged algebra.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum FieldRef {
    Xi(usize),
    Zeta(usize),
}

/// One commutator relation `[lhs.0, lhs.1] = sum coef * field`, with
/// coefficients depending on the frame-metric parameters.
#[derive(Clone, Debug)]
pub struct Relation {
    pub lhs: (FieldRef, FieldRef),
    pub rhs: Vec<(Expr, FieldRef)>,
}

/// Coordinate realization of one catalog entry: homogeneity fields, the
/// reciprocal invariant frame and coframe, extra Killing fields with their
/// enlarged-algebra table, and a safe sampling box per chart.
pub struct Realization {
    pub ty: BianchiType,
    pub xi: Vec<ChartField>,
    pub inv: Vec<ChartField>,
    pub sigma: Vec<ChartField>,
    pub zetas: Vec<ChartField>,
    pub enlarged: Vec<Relation>,
    pub sample_box: [(f64, f64); 3],
}

fn vf(components: [&str; 3]) -> ChartField {
    ChartField::new(
        components
            .iter()
            .map(|s| parse_sexpr(s).expect("table expression parses"))
            .collect(),
    )
}

fn fref(tag: &str) -> FieldRef {
    let (kind, idx) = tag.split_at(tag.len() - 1);
    let i: usize = idx.parse().expect("field index");
    match kind {
        "xi" => FieldRef::Xi(i - 1),
        "zeta" => FieldRef::Zeta(i - 1),
        other => panic!("bad field tag {other}"),
    }
}

fn rel(a: &str, b: &str, rhs: &[(&str, &str)]) -> Relation {
    Relation {
        lhs: (fref(a), fref(b)),
        rhs: rhs
            .iter()
            .map(|(coef, field)| (parse_sexpr(coef).expect("coefficient parses"), fref(field)))
            .collect(),
    }
}

/// Build the realization for a catalog entry. Parametrized families need a
/// numeric q.
pub fn realization(entry: &CatalogEntry) -> Result<Realization> {
    let ty = entry.id();
    if ty.needs_q() && entry.q().and_then(|q| q.as_rational()).is_none() {
        return Err(Error::Unsupported(
            "coordinate realizations need a numeric group parameter q".into(),
        ));
    }
    let boxed = |lo: f64, hi: f64| [(lo, hi); 3];
    let r = match ty {
        BianchiType::I => Realization {
            ty,
            xi: vec![vf(["1", "0", "0"]), vf(["0", "1", "0"]), vf(["0", "0", "1"])],
            inv: vec![vf(["1", "0", "0"]), vf(["0", "1", "0"]), vf(["0", "0", "1"])],
            sigma: vec![vf(["1", "0", "0"]), vf(["0", "1", "0"]), vf(["0", "0", "1"])],
            zetas: vec![
                vf(["0", "(- (/ z h22))", "(/ y h33)"]),
                vf(["(- (/ z h11))", "0", "(/ x h33)"]),
                vf(["(- (/ y h11))", "(/ x h22)", "0"]),
            ],
            enlarged: vec![
                rel("zeta1", "zeta2", &[("(/ 1 h33)", "zeta3")]),
                rel("zeta2", "zeta3", &[("(/ 1 h11)", "zeta1")]),
                rel("zeta3", "zeta1", &[("(/ 1 h22)", "zeta2")]),
                rel("xi2", "zeta1", &[("(/ 1 h33)", "xi3")]),
                rel("xi3", "zeta1", &[("(- (/ 1 h22))", "xi2")]),
                rel("xi1", "zeta2", &[("(/ 1 h33)", "xi3")]),
                rel("xi3", "zeta2", &[("(- (/ 1 h11))", "xi1")]),
                rel("xi1", "zeta3", &[("(/ 1 h22)", "xi2")]),
                rel("xi2", "zeta3", &[("(- (/ 1 h11))", "xi1")]),
            ],
            sample_box: boxed(-2.0, 2.0),
        },
        BianchiType::II => Realization {
            ty,
            xi: vec![vf(["0", "1", "0"]), vf(["0", "0", "1"]), vf(["1", "z", "0"])],
            inv: vec![vf(["0", "1", "0"]), vf(["0", "x", "1"]), vf(["1", "0", "0"])],
            sigma: vec![
                vf(["0", "1", "(- x)"]),
                vf(["0", "0", "1"]),
                vf(["1", "0", "0"]),
            ],
            zetas: vec![vf([
                "(/ (+ (* z h22) (* x h23)) det23)",
                "(/ (- (* z z h22) (* x x h33)) (* 2 det23))",
                "(- (/ (+ (* z h23) (* x h33)) det23))",
            ])],
            enlarged: vec![
                rel("xi2", "xi3", &[("1", "xi1")]),
                rel(
                    "xi2",
                    "zeta1",
                    &[("(- (/ h23 det23))", "xi2"), ("(/ h22 det23)", "xi3")],
                ),
                rel(
                    "xi3",
                    "zeta1",
                    &[("(- (/ h33 det23))", "xi2"), ("(/ h23 det23)", "xi3")],
                ),
            ],
            sample_box: boxed(-2.0, 2.0),
        },
        BianchiType::III => Realization {
            ty,
            xi: vec![vf(["0", "1", "0"]), vf(["0", "0", "1"]), vf(["1", "y", "0"])],
            inv: vec![
                vf(["0", "(exp x)", "0"]),
                vf(["0", "0", "1"]),
                vf(["1", "0", "0"]),
            ],
            sigma: vec![
                vf(["0", "(exp (- x))", "0"]),
                vf(["0", "0", "1"]),
                vf(["1", "0", "0"]),
            ],
            zetas: vec![vf([
                "(/ y h33)",
                "(- (/ (* y y) (* 2 h33)) (/ (* (exp (* 2 x)) h22) (* 2 det2)))",
                "(/ (* (exp x) h12) det2)",
            ])],
            enlarged: vec![
                rel("xi1", "xi3", &[("1", "xi1")]),
                rel("xi1", "zeta1", &[("(/ 1 h33)", "xi3")]),
                rel("xi3", "zeta1", &[("1", "zeta1")]),
            ],
            sample_box: boxed(-1.5, 1.5),
        },
        BianchiType::IV => Realization {
            ty,
            xi: vec![
                vf(["0", "1", "0"]),
                vf(["0", "0", "1"]),
                vf(["1", "(+ y z)", "z"]),
            ],
            inv: vec![
                vf(["0", "(exp x)", "0"]),
                vf(["0", "(* x (exp x))", "(exp x)"]),
                vf(["1", "0", "0"]),
            ],
            sigma: vec![
                vf(["0", "(exp (- x))", "(- (* x (exp (- x))))"]),
                vf(["0", "0", "(exp (- x))"]),
                vf(["1", "0", "0"]),
            ],
            zetas: vec![],
            enlarged: vec![],
            sample_box: boxed(-1.5, 1.5),
        },
        BianchiType::V => Realization {
            ty,
            xi: vec![vf(["0", "1", "0"]), vf(["0", "0", "1"]), vf(["1", "y", "z"])],
            inv: vec![
                vf(["0", "(exp x)", "0"]),
                vf(["0", "0", "(exp x)"]),
                vf(["1", "0", "0"]),
            ],
            sigma: vec![
                vf(["0", "(exp (- x))", "0"]),
                vf(["0", "0", "(exp (- x))"]),
                vf(["1", "0", "0"]),
            ],
            zetas: vec![
                vf([
                    "(/ z h33)",
                    "(+ (/ (+ (* y y h11 h12) (* 2 y z h11 h22) (* z z h12 h22)) \
                       (* 2 det2 h33)) (/ (* (exp (* 2 x)) h12) (* 2 det2)))",
                    "(- (/ (+ (* -1 y y h11 h11) (* -2 y z h11 h12) \
                       (* z z (- (* h11 h22) (* 2 h12 h12)))) (* 2 det2 h33)) \
                       (/ (* (exp (* 2 x)) h11) (* 2 det2)))",
                ]),
                vf([
                    "(/ y h33)",
                    "(- (/ (+ (* -2 y y h12 h12) (* y y h11 h22) (* -2 y z h12 h22) \
                       (* -1 z z h22 h22)) (* 2 det2 h33)) \
                       (/ (* (exp (* 2 x)) h22) (* 2 det2)))",
                    "(+ (/ (+ (* y y h11 h12) (* 2 y z h11 h22) (* z z h12 h22)) \
                       (* 2 det2 h33)) (/ (* (exp (* 2 x)) h12) (* 2 det2)))",
                ]),
                vf([
                    "0",
                    "(- (/ (+ (* y h12) (* z h22)) det2))",
                    "(/ (+ (* y h11) (* z h12)) det2)",
                ]),
            ],
            enlarged: vec![
                rel("xi2", "xi3", &[("1", "xi2")]),
                rel("xi1", "xi3", &[("1", "xi1")]),
                rel(
                    "zeta2",
                    "zeta3",
                    &[("(/ h22 det2)", "zeta1"), ("(/ h12 det2)", "zeta2")],
                ),
                rel(
                    "zeta3",
                    "zeta1",
                    &[("(/ h12 det2)", "zeta1"), ("(/ h11 det2)", "zeta2")],
                ),
                rel("xi1", "zeta1", &[("(- (/ h11 h33))", "zeta3")]),
                rel(
                    "xi2",
                    "zeta1",
                    &[("(/ 1 h33)", "xi3"), ("(- (/ h12 h33))", "zeta3")],
                ),
                rel("xi3", "zeta1", &[("1", "zeta1")]),
                rel(
                    "xi1",
                    "zeta2",
                    &[("(/ h12 h33)", "zeta3"), ("(/ 1 h33)", "xi3")],
                ),
                rel("xi2", "zeta2", &[("(/ h22 h33)", "zeta3")]),
                rel("xi3", "zeta2", &[("1", "zeta2")]),
                rel(
                    "xi1",
                    "zeta3",
                    &[("(/ h11 det2)", "xi2"), ("(- (/ h12 det2))", "xi1")],
                ),
                rel(
                    "xi2",
                    "zeta3",
                    &[("(/ h12 det2)", "xi2"), ("(- (/ h22 det2))", "xi1")],
                ),
            ],
            sample_box: boxed(-1.5, 1.5),
        },
        BianchiType::VI => Realization {
            ty,
            xi: vec![
                vf(["0", "1", "0"]),
                vf(["0", "0", "1"]),
                vf(["1", "y", "(* q z)"]),
            ],
            inv: vec![
                vf(["0", "(exp x)", "0"]),
                vf(["0", "0", "(exp (* q x))"]),
                vf(["1", "0", "0"]),
            ],
            sigma: vec![
                vf(["0", "(exp (- x))", "0"]),
                vf(["0", "0", "(exp (- (* q x)))"]),
                vf(["1", "0", "0"]),
            ],
            zetas: vec![],
            enlarged: vec![],
            sample_box: boxed(-1.2, 1.2),
        },
        BianchiType::VII => Realization {
            ty,
            xi: vec![
                vf(["0", "1", "0"]),
                vf(["0", "0", "1"]),
                vf(["1", "(- z)", "(+ y (* q z))"]),
            ],
            // A1 = e^{kx}(cos(ax) - (k/a) sin(ax)), A2 with +, B = -(1/a) e^{kx} sin(ax)
            inv: vec![
                vf([
                    "0",
                    "(* (exp (* k x)) (- (cos (* a x)) (* (/ k a) (sin (* a x)))))",
                    "(/ (* (exp (* k x)) (sin (* a x))) a)",
                ]),
                vf([
                    "0",
                    "(- (/ (* (exp (* k x)) (sin (* a x))) a))",
                    "(* (exp (* k x)) (+ (cos (* a x)) (* (/ k a) (sin (* a x)))))",
                ]),
                vf(["1", "0", "0"]),
            ],
            // C1 = e^{-kx}(cos + (k/a) sin), C2 = e^{-kx}(cos - (k/a) sin),
            // D = -(1/a) e^{-kx} sin
            sigma: vec![
                vf([
                    "0",
                    "(* (exp (- (* k x))) (+ (cos (* a x)) (* (/ k a) (sin (* a x)))))",
                    "(/ (* (exp (- (* k x))) (sin (* a x))) a)",
                ]),
                vf([
                    "0",
                    "(- (/ (* (exp (- (* k x))) (sin (* a x))) a))",
                    "(* (exp (- (* k x))) (- (cos (* a x)) (* (/ k a) (sin (* a x)))))",
                ]),
                vf(["1", "0", "0"]),
            ],
            zetas: vec![],
            enlarged: vec![],
            sample_box: boxed(-1.5, 1.5),
        },
        BianchiType::VIII => Realization {
            ty,
            xi: vec![
                vf([
                    "(/ (exp (- z)) 2)",
                    "(/ (- (exp z) (* y y (exp (- z)))) 2)",
                    "(- (* y (exp (- z))))",
                ]),
                vf(["0", "0", "1"]),
                vf([
                    "(/ (exp (- z)) 2)",
                    "(- (/ (+ (exp z) (* y y (exp (- z)))) 2))",
                    "(- (* y (exp (- z))))",
                ]),
            ],
            inv: vec![
                vf([
                    "(/ (+ 1 (* x x)) 2)",
                    "(/ (- 1 (* 2 x y)) 2)",
                    "(- x)",
                ]),
                vf(["(- x)", "y", "1"]),
                vf([
                    "(/ (- 1 (* x x)) 2)",
                    "(/ (+ -1 (* 2 x y)) 2)",
                    "x",
                ]),
            ],
            sigma: vec![
                vf([
                    "1",
                    "(+ 1 (* x x))",
                    "(- x (+ y (* x x y)))",
                ]),
                vf(["0", "(* 2 x)", "(- 1 (* 2 x y))"]),
                vf([
                    "1",
                    "(+ -1 (* x x))",
                    "(- (+ x y) (* x x y))",
                ]),
            ],
            zetas: vec![],
            enlarged: vec![],
            sample_box: boxed(-1.5, 1.5),
        },
        BianchiType::IX => Realization {
            ty,
            xi: vec![
                vf(["0", "1", "0"]),
                vf([
                    "(cos y)",
                    "(- (* (/ (cos x) (sin x)) (sin y)))",
                    "(/ (sin y) (sin x))",
                ]),
                vf([
                    "(- (sin y))",
                    "(- (* (/ (cos x) (sin x)) (cos y)))",
                    "(/ (cos y) (sin x))",
                ]),
            ],
            inv: vec![
                vf([
                    "(- (sin z))",
                    "(/ (cos z) (sin x))",
                    "(- (* (/ (cos x) (sin x)) (cos z)))",
                ]),
                vf([
                    "(cos z)",
                    "(/ (sin z) (sin x))",
                    "(- (* (/ (cos x) (sin x)) (sin z)))",
                ]),
                vf(["0", "0", "1"]),
            ],
            sigma: vec![
                vf(["(- (sin z))", "(* (sin x) (cos z))", "0"]),
                vf(["(cos z)", "(* (sin x) (sin z))", "0"]),
                vf(["0", "(cos x)", "1"]),
            ],
            zetas: vec![],
            enlarged: vec![],
            sample_box: [(0.3, 2.8), (-3.0, 3.0), (-3.0, 3.0)],
        },
    };
    Ok(r)
}

/// Bind evaluation parameters for an entry: the supplied frame-metric
/// values plus derived quantities (`det2`, `det23`, and the type VII
/// frequencies k = q/2, a = sqrt(4 - q^2)/2).
pub fn bind_params(
    entry: &CatalogEntry,
    h_values: &BTreeMap<String, f64>,
) -> Result<BTreeMap<String, f64>> {
    let mut p = h_values.clone();
    if let Some(q) = entry.q() {
        let q = q
            .as_rational()
            .map(rational_to_f64)
            .ok_or_else(|| Error::Unsupported("numeric q required".into()))?;
        p.insert("q".into(), q);
        if entry.id() == BianchiType::VII {
            p.insert("k".into(), q / 2.0);
            p.insert("a".into(), (4.0 - q * q).sqrt() / 2.0);
        }
    }
    let need = |p: &BTreeMap<String, f64>, k: &str| -> Result<f64> {
        p.get(k)
            .copied()
            .ok_or_else(|| Error::Inconsistent(format!("missing metric value {k}")))
    };
    match entry.id() {
        BianchiType::II => {
            let d = need(&p, "h22")? * need(&p, "h33")? - need(&p, "h23")?.powi(2);
            p.insert("det23".into(), d);
        }
        BianchiType::III | BianchiType::V => {
            let d = need(&p, "h11")? * need(&p, "h22")? - need(&p, "h12")?.powi(2);
            p.insert("det2".into(), d);
            if entry.id() == BianchiType::V {
                // Side relation: h33 = sqrt(h11 h22 - h12^2).
                p.insert("h33".into(), d.sqrt());
            }
        }
        _ => {}
    }
    Ok(p)
}

/// Random pattern-respecting positive-definite metric values for an entry.
pub fn random_pattern_h<R: Rng>(entry: &CatalogEntry, rng: &mut R) -> BTreeMap<String, f64> {
    loop {
        let mut vals = BTreeMap::new();
        for row in &entry.pattern().entries {
            for name in row.iter().flatten() {
                vals.entry(name.to_string())
                    .or_insert_with(|| rng.gen_range(0.4..2.5));
            }
        }
        // Off-diagonal parameters may need to shrink for positive
        // definiteness; retry with fresh draws on failure.
        let get = |k: &str| -> f64 { vals.get(k).copied().unwrap_or(0.0) };
        let h11 = get("h11");
        let h22 = if entry
            .pattern()
            .equalities()
            .contains(&((1, 1), (2, 2)))
        {
            h11
        } else {
            get("h22")
        };
        let (h12, h13, h23) = (get("h12"), get("h13"), get("h23"));
        let h33 = get("h33");
        let det2 = h11 * h22 - h12 * h12;
        let det3 = h11 * (h22 * h33 - h23 * h23) - h12 * (h12 * h33 - h23 * h13)
            + h13 * (h12 * h23 - h22 * h13);
        let h33_eff = if entry.id() == BianchiType::V {
            det2.max(0.0).sqrt()
        } else {
            h33
        };
        if h11 > 0.0 && det2 > 1e-3 && (entry.id() == BianchiType::V || det3 > 1e-3) && h33_eff > 0.0
        {
            return vals;
        }
    }
}
