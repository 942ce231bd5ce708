//! Wire formats: the JSON schemas spoken by the command-line tool and by
//! anything else that feeds untrusted input into the library. Rationals
//! travel as exact `"p"` / `"p/q"` strings; nothing numeric is ever a float
//! in these structures.

use serde::{Deserialize, Serialize};

use crate::curve::{CurveData, MetricGraph, PointOnCurve};
use crate::error::{Error, Result};
use crate::fay::{CoverPoint, FayStatus, FayVerdict, TermSign};
use crate::rational::{fmt_rat, fmt_rat_vec, parse_rat, parse_rat_vec, Rat};
use crate::theta::{DomainPosition, KForm, LatticeVec, ThetaResult};
use crate::udtoda::{SpectralInvariants, UdState};

/// `{"g": 1, "Q": ["0", "1"], "W": ["2", "3"]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub g: usize,
    #[serde(rename = "Q")]
    pub q: Vec<String>,
    #[serde(rename = "W")]
    pub w: Vec<String>,
}

impl StateJson {
    pub fn to_state(&self) -> Result<UdState> {
        UdState::new(self.g, parse_rat_vec(&self.q)?, parse_rat_vec(&self.w)?)
    }

    pub fn from_state(s: &UdState) -> Self {
        StateJson {
            g: s.genus(),
            q: fmt_rat_vec(s.q()),
            w: fmt_rat_vec(s.w()),
        }
    }
}

/// `{"g": 1, "C": ["6", "1", "0"]}` listing `C_{-1}, ..., C_g`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvariantsJson {
    pub g: usize,
    #[serde(rename = "C")]
    pub c: Vec<String>,
}

impl InvariantsJson {
    pub fn to_invariants(&self) -> Result<SpectralInvariants> {
        SpectralInvariants::new(self.g, parse_rat_vec(&self.c)?)
    }

    pub fn from_invariants(inv: &SpectralInvariants) -> Self {
        InvariantsJson {
            g: inv.genus(),
            c: fmt_rat_vec(inv.c()),
        }
    }
}

/// Theta query: `K` (symmetric, positive dominance margin), optional
/// characteristic `beta`, argument `Z`, optional `m` for a domain query.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaQueryJson {
    #[serde(rename = "K")]
    pub k: Vec<Vec<String>>,
    #[serde(default)]
    pub beta: Option<Vec<String>>,
    #[serde(rename = "Z")]
    pub z: Vec<String>,
    #[serde(default)]
    pub m: Option<Vec<i64>>,
}

impl ThetaQueryJson {
    pub fn parse_k(&self) -> Result<KForm> {
        let rows: Result<Vec<Vec<Rat>>> = self.k.iter().map(|r| parse_rat_vec(r)).collect();
        KForm::new(rows?)
    }

    pub fn parse_z(&self) -> Result<Vec<Rat>> {
        parse_rat_vec(&self.z)
    }

    pub fn parse_beta(&self) -> Result<Option<Vec<Rat>>> {
        match &self.beta {
            Some(b) => Ok(Some(parse_rat_vec(b)?)),
            None => Ok(None),
        }
    }
}

/// Theta response.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaResultJson {
    pub value: String,
    pub argmin: Vec<Vec<i64>>,
    pub unique: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
}

impl ThetaResultJson {
    pub fn from_result(r: &ThetaResult, domain: Option<DomainPosition>) -> Self {
        ThetaResultJson {
            value: fmt_rat(&r.value),
            argmin: r.argmin.iter().map(|m| m.0.clone()).collect(),
            unique: r.unique,
            domain: domain.map(|d| {
                match d {
                    DomainPosition::Interior => "interior",
                    DomainPosition::Boundary => "boundary",
                    DomainPosition::Outside => "outside",
                }
                .to_string()
            }),
        }
    }
}

/// A cover point: plane coordinates plus an integer winding vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverPointJson {
    pub x: String,
    pub y: String,
    #[serde(default)]
    pub winding: Option<Vec<i64>>,
}

impl CoverPointJson {
    pub fn resolve(&self, graph: &MetricGraph, g: usize) -> Result<CoverPoint> {
        let point: PointOnCurve = graph.locate(&parse_rat(&self.x)?, &parse_rat(&self.y)?)?;
        let winding = match &self.winding {
            Some(w) => {
                if w.len() != g {
                    return Err(Error::Input(format!("winding must have length {g}")));
                }
                LatticeVec(w.clone())
            }
            None => LatticeVec::zero(g),
        };
        Ok(CoverPoint::new(point, winding))
    }
}

/// Input of the trisecant check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FayInputJson {
    pub g: usize,
    #[serde(rename = "C")]
    pub c: Vec<String>,
    pub beta: Vec<String>,
    #[serde(rename = "Z")]
    pub z: Vec<String>,
    pub points: Vec<CoverPointJson>,
}

/// Verdict of the trisecant check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FayVerdictJson {
    #[serde(rename = "F")]
    pub f: Vec<String>,
    pub k: Vec<Option<i64>>,
    pub s: Vec<String>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds_index: Option<usize>,
}

impl FayVerdictJson {
    pub fn from_verdict(v: &FayVerdict) -> Self {
        let s = v
            .s
            .iter()
            .map(|s| {
                match s {
                    TermSign::Plus => "+1",
                    TermSign::Minus => "-1",
                    TermSign::Ambiguous => "ambiguous",
                }
                .to_string()
            })
            .collect();
        let (status, holds_index) = match v.status {
            FayStatus::Holds(i) => ("holds".to_string(), Some(i)),
            FayStatus::SignAmbiguous => ("sign-ambiguous".to_string(), None),
            FayStatus::Violated => ("violated".to_string(), None),
        };
        FayVerdictJson {
            f: v.f.iter().map(fmt_rat).collect(),
            k: v.k.to_vec(),
            s,
            status,
            holds_index,
        }
    }
}

/// Curve data plus the embedded graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveJson {
    pub g: usize,
    #[serde(rename = "C")]
    pub c: Vec<String>,
    #[serde(rename = "L")]
    pub l: String,
    pub lambda: Vec<String>,
    pub p: Vec<String>,
    pub lambda_vec: Vec<String>,
    #[serde(rename = "K")]
    pub k: Vec<Vec<String>>,
    pub graph: GraphJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<[String; 2]>,
    pub edges: Vec<EdgeJson>,
    pub rays: Vec<RayJson>,
    /// cycles as lists of `[edge id, sign]`
    pub cycles: Vec<Vec<(usize, i8)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: usize,
    pub to: usize,
    pub dir: [i64; 2],
    pub length: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RayJson {
    pub origin: [String; 2],
    pub dir: [i64; 2],
}

pub fn curve_to_json(cd: &CurveData, graph: &MetricGraph) -> CurveJson {
    let cycles = graph
        .cycles()
        .iter()
        .map(|c| {
            c.coef()
                .iter()
                .enumerate()
                .filter(|(_, v)| !num::Zero::is_zero(*v))
                .map(|(i, v)| (i, if *v > Rat::from_integer(0.into()) { 1i8 } else { -1 }))
                .collect()
        })
        .collect();
    CurveJson {
        g: cd.genus(),
        c: fmt_rat_vec(cd.invariants().c()),
        l: fmt_rat(cd.l_period()),
        lambda: fmt_rat_vec(cd.lambda()),
        p: fmt_rat_vec(cd.p()),
        lambda_vec: fmt_rat_vec(cd.lambda_vec()),
        k: cd
            .k()
            .mat()
            .iter()
            .map(|row| fmt_rat_vec(row))
            .collect(),
        graph: GraphJson {
            vertices: graph
                .vertices()
                .iter()
                .map(|v| [fmt_rat(&v.x), fmt_rat(&v.y)])
                .collect(),
            edges: graph
                .edges()
                .iter()
                .map(|e| EdgeJson {
                    from: e.from,
                    to: e.to,
                    dir: [e.dir.0, e.dir.1],
                    length: fmt_rat(&e.length),
                })
                .collect(),
            rays: graph
                .rays()
                .iter()
                .map(|r| RayJson {
                    origin: [fmt_rat(&r.origin.0), fmt_rat(&r.origin.1)],
                    dir: [r.dir.0, r.dir.1],
                })
                .collect(),
            cycles,
        },
    }
}

/// Input of the theta-solution runner.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveInputJson {
    pub g: usize,
    #[serde(rename = "C")]
    pub c: Vec<String>,
    #[serde(rename = "Z0")]
    pub z0: Vec<String>,
    pub steps: usize,
}

/// Input of the discrete-lattice comparison harness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteInputJson {
    pub g: usize,
    #[serde(rename = "Q")]
    pub q: Vec<String>,
    #[serde(rename = "W")]
    pub w: Vec<String>,
    pub eps: Vec<String>,
    pub steps: usize,
}

/// Input of the hyperelliptic limit harness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UdLimitInputJson {
    pub g: usize,
    #[serde(rename = "C")]
    pub c: Vec<String>,
    pub eps: Vec<String>,
    #[serde(default)]
    pub precision: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_i;

    #[test]
    fn state_round_trip() {
        let j: StateJson =
            serde_json::from_str(r#"{"g":1,"Q":["0","1"],"W":["2","3"]}"#).unwrap();
        let s = j.to_state().unwrap();
        assert_eq!(s.q()[1], rat_i(1));
        let back = serde_json::to_string(&StateJson::from_state(&s)).unwrap();
        let j2: StateJson = serde_json::from_str(&back).unwrap();
        assert_eq!(j2.to_state().unwrap(), s);
    }

    #[test]
    fn malformed_inputs_are_input_errors() {
        let j: StateJson =
            serde_json::from_str(r#"{"g":1,"Q":["0","x"],"W":["2","3"]}"#).unwrap();
        assert!(matches!(j.to_state(), Err(Error::Input(_))));
    }
}
