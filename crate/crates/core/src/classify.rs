//! Complexity verdicts for `sHom(H)`, `LpHom(H)` and `LsHom(H)`, each with
//! a certificate that can be re-checked independently.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{BrGraph, Graph};
use crate::hom::{
    component_edge_slots, is_switch_hom, shom_tractable, switch_core_retract, Homomorphism,
    Retract, SwitchHom,
};
use crate::io::witness_to_json;
use crate::order::{newmain_build, newmain_premise_search, PremiseHit};
use crate::poly::{
    check_props, hr_nu3, search_poly3, ExcluderTable, PermutableTriple, PolyProps, Polymorphism3,
    SearchOutcome, Target,
};
use crate::switching::{normalize_blue_into_red, switch_at, switching_graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    P,
    #[serde(rename = "NPC")]
    Npc,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::P => "P",
            Answer::Npc => "NPC",
            Answer::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    SHom,
    LpHom,
    LsHom,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::SHom => "shom",
            Problem::LpHom => "lphom",
            Problem::LsHom => "lshom",
        }
    }
}

/// Evidence behind a verdict.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// The switch-core of the input and the colour-slot count of each component.
    SwitchCore {
        core: Retract,
        component_slots: Vec<usize>,
    },
    /// A permutable triple of `graph` with its three excluders.
    PermutableTriple {
        graph: Graph,
        triple: PermutableTriple,
    },
    /// A ternary operation on `target` with the listed properties.
    Polymorphism {
        target: Target,
        table: Polymorphism3,
        props: PolyProps,
    },
    /// A newmain witness for a switching of the input.
    Newmain(Box<PremiseHit>),
    /// The verdict of a problem this one reduces to or from.
    Reduction { note: String, via: Box<Verdict> },
    /// Rules tried without a decision.
    Attempts(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub problem: Problem,
    pub answer: Answer,
    /// The rule that decided the answer.
    pub rule: String,
    pub certificate: Certificate,
}

impl Verdict {
    /// Re-checks the certificate against the input graph.
    pub fn verify(&self, h: &BrGraph) -> Result<()> {
        let fail = |m: &str| {
            Err(Error::SelfCheck(format!(
                "{} certificate: {m}",
                self.problem.name()
            )))
        };
        match &self.certificate {
            Certificate::SwitchCore {
                core,
                component_slots: slots,
            } => {
                let sh = SwitchHom {
                    switch_set: core
                        .switch_set
                        .clone()
                        .unwrap_or_else(|| crate::SwitchSet::empty(h.len())),
                    map: core.map.clone(),
                };
                if !is_switch_hom(h, h, &sh)?
                    || !core.map.map.iter().all(|v| core.vertices.contains(v))
                {
                    return fail("switch-core map is not a switch-homomorphism into the core");
                }
                if h.induced(&core.vertices)? != core.graph
                    || component_edge_slots(&core.graph) != *slots
                {
                    return fail("core graph or slot count mismatch");
                }
                let tractable = shom_tractable(slots);
                if tractable != (self.answer == Answer::P) {
                    return fail("answer does not match the slot count");
                }
            }
            Certificate::PermutableTriple { graph, triple } => {
                if !triple.verify(graph) {
                    return fail("excluder certificate does not verify");
                }
            }
            Certificate::Polymorphism {
                target,
                table,
                props,
            } => {
                if !check_props(target, table, *props)?.all_hold() {
                    return fail("operation lacks a claimed property");
                }
            }
            Certificate::Newmain(hit) => {
                let rebuilt = newmain_build(&hit.build.witness)?;
                if switch_at(h, &hit.switch_set)? != rebuilt.h || rebuilt.phi != hit.build.phi {
                    return fail("witness does not rebuild the switched input");
                }
            }
            Certificate::Reduction { via, .. } => via.verify(h)?,
            Certificate::Attempts(_) => {}
        }
        Ok(())
    }

    /// JSON report with vertex names.
    pub fn to_json(&self, h: &BrGraph) -> Value {
        json!({
            "problem": self.problem.name(),
            "answer": self.answer.to_string(),
            "rule": self.rule,
            "certificate": self.certificate_json(h),
        })
    }

    fn certificate_json(&self, h: &BrGraph) -> Value {
        match &self.certificate {
            Certificate::SwitchCore {
                core,
                component_slots,
            } => json!({
                "kind": "switch_core",
                "vertices": core.vertices.iter().map(|&v| h.name(v)).collect::<Vec<_>>(),
                "graph": crate::io::graph_to_json(&core.graph, None),
                "component_slots": component_slots,
                "switch_set": core.switch_set.as_ref().map(|s| s.names(h)).unwrap_or_default(),
                "map": map_json(h, &core.map),
            }),
            Certificate::PermutableTriple { graph, triple } => {
                let mut v = triple.to_json(graph);
                v["kind"] = json!("permutable_triple");
                v
            }
            Certificate::Polymorphism { target, props, .. } => json!({
                "kind": "polymorphism",
                "target_vertices": target.len(),
                "properties": props.props().iter().map(|p| p.name()).collect::<Vec<_>>(),
            }),
            Certificate::Newmain(hit) => json!({
                "kind": "newmain",
                "switch_set": hit.switch_set.names(h),
                "witness": witness_to_json(&hit.build.witness),
                "table_entries": hit.build.phi.table().len(),
            }),
            Certificate::Reduction { note, via } => json!({
                "kind": "reduction",
                "note": note,
                "via": via.to_json(h),
            }),
            Certificate::Attempts(rules) => json!({
                "kind": "attempts",
                "rules": rules,
            }),
        }
    }

    /// The polymorphism table carried by this verdict, if any, with the
    /// graph it acts on.
    pub fn table(&self) -> Option<(&BrGraph, &Polymorphism3)> {
        match &self.certificate {
            Certificate::Polymorphism { target, table, .. } => Some((&target.graph, table)),
            Certificate::Newmain(hit) => Some((&hit.build.switching.graph, &hit.build.phi)),
            Certificate::Reduction { via, .. } => via.table(),
            _ => None,
        }
    }
}

fn map_json(h: &BrGraph, map: &Homomorphism) -> Value {
    let mut obj = serde_json::Map::new();
    for v in h.vertices() {
        obj.insert(h.name(v).to_string(), json!(h.name(map.image(v))));
    }
    Value::Object(obj)
}

/// `sHom(H)` is polynomial when every component of the switch-core has at
/// most two colour slots, NP-complete otherwise.
pub fn classify_shom(h: &BrGraph) -> Result<Verdict> {
    let core = switch_core_retract(h)?;
    let slots = component_edge_slots(&core.graph);
    let answer = if shom_tractable(&slots) {
        Answer::P
    } else {
        Answer::Npc
    };
    let verdict = Verdict {
        problem: Problem::SHom,
        answer,
        rule: "switch-core size".into(),
        certificate: Certificate::SwitchCore {
            core,
            component_slots: slots,
        },
    };
    verdict.verify(h)?;
    Ok(verdict)
}

/// `LpHom(H)` is polynomial exactly when the red graph of `P(H)` has no
/// permutable triple; the explicit conservative NU3 is then a certificate.
pub fn classify_lphom(h: &BrGraph) -> Result<Verdict> {
    let pg = switching_graph(h);
    let red = pg.graph.red_graph();
    let table = ExcluderTable::compute(&red)?;
    let verdict = match table.permutable().first() {
        Some(&triple) => {
            let certificates =
                [0, 1, 2].map(|t| table.certificate(triple, t).expect("excluder exists"));
            Verdict {
                problem: Problem::LpHom,
                answer: Answer::Npc,
                rule: "permutable triple in the red graph of P(H)".into(),
                certificate: Certificate::PermutableTriple {
                    triple: PermutableTriple {
                        triple,
                        certificates,
                    },
                    graph: red,
                },
            }
        }
        None => Verdict {
            problem: Problem::LpHom,
            answer: Answer::P,
            rule: "conservative NU3 on P(H)".into(),
            certificate: Certificate::Polymorphism {
                table: hr_nu3(&red)?,
                target: Target::switching(&pg),
                props: PolyProps {
                    conservative: true,
                    nu3: true,
                    ..PolyProps::none()
                },
            },
        },
    };
    verdict.verify(h)?;
    Ok(verdict)
}

/// Rule names used by [`classify_lshom`].
pub mod rules {
    pub const P1: &str = "P1: LpHom(H) in P";
    pub const P2: &str = "P2: newmain premise";
    pub const P3: &str = "P3: semi-conservative WNU on P(H) (arity 3)";
    pub const N1: &str = "N1: sHom(H) NP-complete";
    pub const N2: &str = "N2: permutable triple in the red graph of normalized H";
}

/// `LsHom(H)` by a cascade of rules. The cheap rules P1, N1, P2 and N2 are
/// all evaluated and must not disagree; if none decides, a
/// semi-conservative WNU is searched for at arity 3. Without a decision the
/// answer is UNKNOWN with the attempted rules.
pub fn classify_lshom(h: &BrGraph) -> Result<Verdict> {
    let mut attempted = Vec::new();
    let mut positive: Vec<Verdict> = Vec::new();
    let mut negative: Vec<Verdict> = Vec::new();
    let wrap = |rule: &str, answer: Answer, certificate: Certificate| Verdict {
        problem: Problem::LsHom,
        answer,
        rule: rule.into(),
        certificate,
    };

    let lp = classify_lphom(h)?;
    attempted.push(rules::P1.to_string());
    if lp.answer == Answer::P {
        positive.push(wrap(
            rules::P1,
            Answer::P,
            Certificate::Reduction {
                note: "LsHom(H) reduces to LpHom(H)".into(),
                via: Box::new(lp),
            },
        ));
    }

    let sh = classify_shom(h)?;
    attempted.push(rules::N1.to_string());
    if sh.answer == Answer::Npc {
        negative.push(wrap(
            rules::N1,
            Answer::Npc,
            Certificate::Reduction {
                note: "sHom(H) reduces to LsHom(H)".into(),
                via: Box::new(sh),
            },
        ));
    }

    if h.is_irreflexive() {
        attempted.push(rules::P2.to_string());
        if let Some(hit) = newmain_premise_search(h)? {
            positive.push(wrap(
                rules::P2,
                Answer::P,
                Certificate::Newmain(Box::new(hit)),
            ));
        }
        if let Some(s) = normalize_blue_into_red(h) {
            attempted.push(rules::N2.to_string());
            let red = switch_at(h, &s)?.red_graph();
            let table = ExcluderTable::compute(&red)?;
            if let Some(&triple) = table.permutable().first() {
                let certificates =
                    [0, 1, 2].map(|t| table.certificate(triple, t).expect("excluder exists"));
                negative.push(wrap(
                    rules::N2,
                    Answer::Npc,
                    Certificate::PermutableTriple {
                        triple: PermutableTriple {
                            triple,
                            certificates,
                        },
                        graph: red,
                    },
                ));
            }
        }
    }

    if let (Some(p), Some(n)) = (positive.first(), negative.first()) {
        return Err(Error::SelfCheck(format!(
            "rules disagree on LsHom: `{}` gives P, `{}` gives NPC",
            p.rule, n.rule
        )));
    }
    let decided = positive
        .into_iter()
        .next()
        .or_else(|| negative.into_iter().next());
    let verdict = match decided {
        Some(v) => v,
        None => {
            attempted.push(rules::P3.to_string());
            let pg = switching_graph(h);
            let target = Target::switching(&pg);
            let props = PolyProps {
                semi_conservative: true,
                wnu: true,
                ..PolyProps::none()
            };
            match search_poly3(&target, props)? {
                SearchOutcome::Found(table) => wrap(
                    rules::P3,
                    Answer::P,
                    Certificate::Polymorphism {
                        target,
                        table,
                        props,
                    },
                ),
                SearchOutcome::Exhausted => {
                    wrap("none", Answer::Unknown, Certificate::Attempts(attempted))
                }
            }
        }
    };
    verdict.verify(h)?;
    Ok(verdict)
}
