use super::StructureConstants;
use crate::exact_algebra::{var, Poly, Scalar, SideRelation};
use crate::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// The nine three-dimensional types.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum BianchiType {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
}

impl BianchiType {
    pub const ALL: [BianchiType; 9] = [
        BianchiType::I,
        BianchiType::II,
        BianchiType::III,
        BianchiType::IV,
        BianchiType::V,
        BianchiType::VI,
        BianchiType::VII,
        BianchiType::VIII,
        BianchiType::IX,
    ];

    pub fn needs_q(&self) -> bool {
        matches!(self, BianchiType::VI | BianchiType::VII)
    }

    /// A representative in-range q for the parametrized families.
    pub fn sample_q(&self) -> Option<Scalar> {
        match self {
            BianchiType::VI => Some(Scalar::from_int(2)),
            BianchiType::VII => Some(Scalar::from_int(1)),
            _ => None,
        }
    }
}

impl fmt::Display for BianchiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BianchiType::I => "I",
            BianchiType::II => "II",
            BianchiType::III => "III",
            BianchiType::IV => "IV",
            BianchiType::V => "V",
            BianchiType::VI => "VI",
            BianchiType::VII => "VII",
            BianchiType::VIII => "VIII",
            BianchiType::IX => "IX",
        };
        write!(f, "{s}")
    }
}

impl FromStr for BianchiType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_uppercase().as_str() {
            "I" | "1" => Ok(BianchiType::I),
            "II" | "2" => Ok(BianchiType::II),
            "III" | "3" => Ok(BianchiType::III),
            "IV" | "4" => Ok(BianchiType::IV),
            "V" | "5" => Ok(BianchiType::V),
            "VI" | "6" => Ok(BianchiType::VI),
            "VII" | "7" => Ok(BianchiType::VII),
            "VIII" | "8" => Ok(BianchiType::VIII),
            "IX" | "9" => Ok(BianchiType::IX),
            other => Err(Error::InvalidParameter(format!(
                "unknown Bianchi type `{other}`"
            ))),
        }
    }
}

/// Symbolic pattern of an irreducible frame metric: entry (i, j) is either
/// zero or a named parameter; repeated names encode equalities. A side
/// relation may bind one parameter to a polynomial in the others.
#[derive(Clone, Debug)]
pub struct MetricPattern {
    pub entries: [[Option<&'static str>; 3]; 3],
    pub relations: Vec<SideRelation>,
}

impl MetricPattern {
    fn new(entries: [[Option<&'static str>; 3]; 3]) -> Self {
        MetricPattern {
            entries,
            relations: Vec::new(),
        }
    }

    fn diagonal() -> Self {
        MetricPattern::new([
            [Some("h11"), None, None],
            [None, Some("h22"), None],
            [None, None, Some("h33")],
        ])
    }

    /// Off-diagonal positions (1-based, i < j) required to vanish.
    pub fn zero_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in (i + 1)..3 {
                if self.entries[i][j].is_none() {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    /// Count of independent parameters: distinct names minus those bound by
    /// a side relation.
    pub fn free_params(&self) -> usize {
        let mut names: Vec<&str> = Vec::new();
        for row in &self.entries {
            for e in row.iter().flatten() {
                if !names.contains(e) {
                    names.push(e);
                }
            }
        }
        names.len() - self.relations.len()
    }

    /// Equality constraints among entries (positions sharing one name).
    pub fn equalities(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut seen: Vec<(&str, (usize, usize))> = Vec::new();
        let mut out = Vec::new();
        for i in 0..3 {
            for j in i..3 {
                if let Some(name) = self.entries[i][j] {
                    if let Some((_, first)) = seen.iter().find(|(n, _)| *n == name) {
                        out.push((*first, (i + 1, j + 1)));
                    } else {
                        seen.push((name, (i + 1, j + 1)));
                    }
                }
            }
        }
        out
    }
}

/// Expected per-type results, as recorded for the generic case.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct ExpectedResults {
    pub derivation_dim: usize,
    pub inner_dim: usize,
    pub gauge_rank: usize,
    pub residual_params: usize,
    pub d_total: usize,
    pub extra_count: usize,
    /// The abelian case: the gauge rank is 0 yet the full GL(n) action
    /// still diagonalizes the metric.
    pub abelian_exception: bool,
}

/// One catalog row: constants, irreducible-metric pattern, expectations.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    id: BianchiType,
    q: Option<Scalar>,
    constants: StructureConstants,
    pattern: MetricPattern,
    expected: ExpectedResults,
}

impl CatalogEntry {
    pub fn id(&self) -> BianchiType {
        self.id
    }

    pub fn q(&self) -> Option<&Scalar> {
        self.q.as_ref()
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn pattern(&self) -> &MetricPattern {
        &self.pattern
    }

    pub fn expected(&self) -> &ExpectedResults {
        &self.expected
    }
}

/// Build the catalog entry for `ty`, with `q` required exactly for the
/// parametrized families VI (q not in {0, 1}) and VII (q^2 < 4).
pub fn catalog(ty: BianchiType, q: Option<Scalar>) -> Result<CatalogEntry> {
    if ty.needs_q() != q.is_some() {
        return Err(Error::InvalidParameter(if ty.needs_q() {
            format!("type {ty} requires a group parameter q")
        } else {
            format!("type {ty} takes no group parameter")
        }));
    }
    let one = Scalar::one;
    let mut c = StructureConstants::zeros(3);
    let expected = |der, inner, gauge, d_total, extra, abelian| ExpectedResults {
        derivation_dim: der,
        inner_dim: inner,
        gauge_rank: gauge,
        residual_params: 6 - gauge,
        d_total,
        extra_count: extra,
        abelian_exception: abelian,
    };
    let (pattern, expected) = match ty {
        BianchiType::I => (MetricPattern::diagonal(), expected(9, 0, 0, 6, 3, true)),
        BianchiType::II => {
            c.set_pair(1, 2, 3, one());
            (
                MetricPattern::new([
                    [Some("h11"), None, None],
                    [None, Some("h22"), Some("h23")],
                    [None, Some("h23"), Some("h33")],
                ]),
                expected(6, 2, 2, 4, 1, false),
            )
        }
        BianchiType::III => {
            c.set_pair(1, 1, 3, one());
            (
                MetricPattern::new([
                    [Some("h11"), Some("h12"), None],
                    [Some("h12"), Some("h22"), None],
                    [None, None, Some("h33")],
                ]),
                expected(4, 2, 2, 4, 1, false),
            )
        }
        BianchiType::IV => {
            c.set_pair(1, 1, 3, one());
            c.set_pair(1, 2, 3, one());
            c.set_pair(2, 2, 3, one());
            (MetricPattern::diagonal(), expected(4, 3, 3, 3, 0, false))
        }
        BianchiType::V => {
            c.set_pair(1, 1, 3, one());
            c.set_pair(2, 2, 3, one());
            let mut pattern = MetricPattern::new([
                [Some("h11"), Some("h12"), None],
                [Some("h12"), Some("h22"), None],
                [None, None, Some("h33")],
            ]);
            // h33^2 = h11 h22 - h12^2
            let rhs = &(&Poly::var(var("h11")) * &Poly::var(var("h22")))
                - &(&Poly::var(var("h12")) * &Poly::var(var("h12")));
            pattern.relations.push(SideRelation {
                var: var("h33"),
                power: 2,
                rhs,
            });
            (pattern, expected(6, 3, 3, 6, 3, false))
        }
        BianchiType::VI => {
            let q = q.clone().unwrap();
            if let Some(r) = q.as_rational() {
                use num::{One, Zero};
                if r.is_zero() || r.is_one() {
                    return Err(Error::InvalidParameter(
                        "type VI requires q not in {0, 1}".into(),
                    ));
                }
            }
            let minus_one = q
                .as_rational()
                .map(|r| r == &num::BigRational::from_integer((-1).into()))
                .unwrap_or(false);
            c.set_pair(1, 1, 3, one());
            c.set_pair(2, 2, 3, q);
            let pattern = if minus_one {
                MetricPattern::new([
                    [Some("h11"), Some("h12"), None],
                    [Some("h12"), Some("h11"), None],
                    [None, None, Some("h33")],
                ])
            } else {
                MetricPattern::diagonal()
            };
            (pattern, expected(4, 3, 3, 3, 0, false))
        }
        BianchiType::VII => {
            let q = q.clone().unwrap();
            if let Some(r) = q.as_rational() {
                if (r * r) >= num::BigRational::from_integer(4.into()) {
                    return Err(Error::InvalidParameter(
                        "type VII requires q^2 < 4".into(),
                    ));
                }
            }
            c.set_pair(2, 1, 3, one());
            c.set_pair(1, 2, 3, Scalar::from_int(-1));
            c.set_pair(2, 2, 3, q);
            (MetricPattern::diagonal(), expected(4, 3, 3, 3, 0, false))
        }
        BianchiType::VIII => {
            c.set_pair(1, 2, 3, Scalar::from_int(-1));
            c.set_pair(2, 3, 1, one());
            c.set_pair(3, 1, 2, one());
            (MetricPattern::diagonal(), expected(3, 3, 3, 3, 0, false))
        }
        BianchiType::IX => {
            c.set_pair(1, 2, 3, one());
            c.set_pair(2, 3, 1, one());
            c.set_pair(3, 1, 2, one());
            (MetricPattern::diagonal(), expected(3, 3, 3, 3, 0, false))
        }
    };
    Ok(CatalogEntry {
        id: ty,
        q,
        constants: c,
        pattern,
        expected,
    })
}
