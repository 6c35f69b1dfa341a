//! Deterministic analysis report of one defining datum.

use std::fmt::{self, Write as _};

use serde_json::{json, Value};

use crate::acomplex::{discrepancies, leaf_roofs, singularity_type, Discrepancy, SingularityReport, Verdict};
use crate::coxiter::{iterate_chain_from_data, Chain};
use crate::data::{int_json, rat_json, DefiningData, Normal, Variant};
use crate::error::{Error, Result};
use crate::gorenstein::{gorenstein_data, GorensteinData};
use crate::invariants::{genus, is_factorial, is_total_space_rational, profile, InvariantProfile};
use crate::linalg::{fmt_rat, Cokernel, Int, Rat};

/// Default cap on the length of the Cox ring chain in a report.
pub const CHAIN_STEPS: usize = 10;

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub input: DefiningData,
    pub valid: bool,
    pub normalized: Normal<DefiningData>,
    pub class_group: Cokernel,
    pub profile: Option<InvariantProfile>,
    pub gorenstein: Option<GorensteinData>,
    pub singularities: Option<SingularityReport>,
    /// union of the roof vertices of the anticanonical complex
    pub vertices: Option<Vec<Vec<Rat>>>,
    pub discrepancies: Option<Vec<(Vec<Int>, Discrepancy)>>,
    pub genus: Option<Int>,
    pub total_space_rational: Option<bool>,
    pub factorial: bool,
    pub chain: Option<Chain>,
}

/// Turn an unmet precondition into `None`; internal errors stay errors.
fn optional<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Internal(m)) => Err(Error::Internal(m)),
        Err(_) => Ok(None),
    }
}

pub fn analyze(data: &DefiningData) -> Result<AnalysisReport> {
    let e = &data.exponents;
    let normalized = data.normalize()?.0;
    let variant_two = e.variant == Variant::Two;
    let vertices = optional(leaf_roofs(data))?.map(|roofs| {
        let mut vs: Vec<Vec<Rat>> = Vec::new();
        for r in roofs {
            for v in r.roof.vertices {
                if !vs.contains(&v) {
                    vs.push(v);
                }
            }
        }
        vs.sort();
        vs
    });
    Ok(AnalysisReport {
        input: data.clone(),
        valid: data.violations().is_empty(),
        normalized,
        class_group: data.class_group(),
        profile: optional(profile(e))?,
        gorenstein: optional(gorenstein_data(data))?,
        singularities: optional(singularity_type(data))?,
        vertices,
        discrepancies: optional(discrepancies(data))?,
        genus: if variant_two { optional(genus(e))? } else { None },
        total_space_rational: if variant_two { optional(is_total_space_rational(e))? } else { None },
        factorial: is_factorial(e),
        chain: if variant_two { optional(iterate_chain_from_data(data, CHAIN_STEPS))? } else { None },
    })
}

fn ints(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_json).collect())
}

fn opt<T>(v: &Option<T>, f: impl FnOnce(&T) -> Value) -> Value {
    v.as_ref().map_or(Value::Null, f)
}

fn disc_json(d: &Discrepancy) -> Value {
    match d {
        Discrepancy::Value(q) => rat_json(q),
        Discrepancy::AtMostMinusOne => json!("<=-1"),
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> Value {
        json!({
            "input": self.input.to_json(),
            "valid": self.valid,
            "normalized": match &self.normalized {
                Normal::Ring(d) => d.to_json(),
                Normal::Polynomial(n) => json!({ "polynomial": n }),
            },
            "class_group": {
                "rank": self.class_group.free_rank,
                "torsion": ints(&self.class_group.torsion),
            },
            "invariants": opt(&self.profile, |p| json!({
                "block_gcds": ints(&p.block_gcds),
                "gcd": int_json(&p.gcd),
                "lcm": int_json(&p.lcm),
                "cofactors": ints(&p.cofactors),
                "complement_gcds": ints(&p.complement_gcds),
            })),
            "gorenstein": opt(&self.gorenstein, |g| json!({
                "q_gorenstein": g.q_gorenstein,
                "iota": int_json(&g.iota),
                "zeta": int_json(&g.zeta),
                "mu": ints(&g.mu),
                "eta": ints(&g.eta),
                "u": rats(&g.u),
            })),
            "singularities": opt(&self.singularities, |s| json!({
                "log_terminal": s.log_terminal.to_json(),
                "canonical": s.canonical.to_json(),
                "terminal": s.terminal.to_json(),
                "cdv": s.cdv.to_json(),
                "witnesses": {
                    "canonical": s.canonical_witnesses.iter().map(|w| ints(w)).collect::<Vec<_>>(),
                    "terminal": s.terminal_witnesses.iter().map(|w| ints(w)).collect::<Vec<_>>(),
                    "cdv": s.cdv_witnesses.iter().map(|w| ints(w)).collect::<Vec<_>>(),
                },
            })),
            "complex": {
                "vertices": opt(&self.vertices, |vs| Value::Array(vs.iter().map(|v| rats(v)).collect())),
                "discrepancies": opt(&self.discrepancies, |ds| Value::Array(
                    ds.iter().map(|(ray, d)| json!({ "ray": ints(ray), "value": disc_json(d) })).collect()
                )),
            },
            "curve": {
                "genus": opt(&self.genus, int_json),
                "total_space_rational": opt(&self.total_space_rational, |b| json!(b)),
                "factorial": self.factorial,
            },
            "chain": opt(&self.chain, |c| Value::Array(c.states.iter().map(Normal::to_json).collect())),
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("json values serialize")
    }
}

fn fmt_point(v: &[Rat]) -> String {
    format!("({})", v.iter().map(fmt_rat).collect::<Vec<_>>().join(","))
}

fn fmt_int_point(v: &[Int]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn verdict(v: Option<Verdict>) -> String {
    v.map_or("n/a".to_string(), |v| v.to_string())
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        let _ = writeln!(s, "exponents:      {}", self.input.exponents);
        let _ = writeln!(s, "valid:          {}", self.valid);
        let normal = match &self.normalized {
            Normal::Ring(d) => d.exponents.to_string(),
            Normal::Polynomial(n) => format!("polynomial({n})"),
        };
        let _ = writeln!(s, "normalized:     {normal}");
        let _ = writeln!(s, "class group:    {}", self.class_group);
        match &self.gorenstein {
            Some(g) if g.q_gorenstein => {
                let _ = writeln!(s, "gorenstein:     iota = {}, zeta = {}", g.iota, g.zeta);
            }
            Some(_) => {
                let _ = writeln!(s, "gorenstein:     not Q-Gorenstein");
            }
            None => {
                let _ = writeln!(s, "gorenstein:     n/a");
            }
        }
        let sing = self.singularities.as_ref();
        let _ = writeln!(s, "log terminal:   {}", verdict(sing.map(|x| x.log_terminal)));
        let _ = writeln!(s, "canonical:      {}", verdict(sing.map(|x| x.canonical)));
        let _ = writeln!(s, "terminal:       {}", verdict(sing.map(|x| x.terminal)));
        let _ = writeln!(s, "cdv:            {}", verdict(sing.map(|x| x.cdv)));
        if let Some(x) = sing {
            if !x.cdv_witnesses.is_empty() {
                let w: Vec<String> = x.cdv_witnesses.iter().map(|w| fmt_int_point(w)).collect();
                let _ = writeln!(s, "cdv witnesses:  {}", w.join(" "));
            }
        }
        if let Some(vs) = &self.vertices {
            let v: Vec<String> = vs.iter().map(|v| fmt_point(v)).collect();
            let _ = writeln!(s, "vertices:       {}", v.join(" "));
        }
        if let Some(ds) = &self.discrepancies {
            let d: Vec<String> = ds
                .iter()
                .map(|(ray, d)| match d {
                    Discrepancy::Value(q) => format!("{} -> {}", fmt_int_point(ray), fmt_rat(q)),
                    Discrepancy::AtMostMinusOne => format!("{} -> <=-1", fmt_int_point(ray)),
                })
                .collect();
            let _ = writeln!(s, "discrepancies:  {}", d.join(", "));
        }
        let _ = writeln!(s, "genus:          {}", self.genus.as_ref().map_or("n/a".into(), |g| g.to_string()));
        let _ = writeln!(
            s,
            "rational total coordinate space: {}",
            self.total_space_rational.map_or("n/a".into(), |b| b.to_string())
        );
        let _ = writeln!(s, "factorial:      {}", self.factorial);
        if let Some(c) = &self.chain {
            let states: Vec<String> = c.states.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "chain:          {}", states.join(" -> "));
        }
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::parse_validate;

    fn e6() -> DefiningData {
        DefiningData::two(&[&[3], &[3], &[2]], 0, &[&[-2, 1, 1]])
    }

    #[test]
    fn e6_report() {
        let r = analyze(&e6()).unwrap();
        let j = r.to_json();
        assert_eq!(j["class_group"], json!({ "rank": 0, "torsion": [3] }));
        assert_eq!(j["gorenstein"]["iota"], json!(1));
        assert_eq!(j["singularities"]["canonical"], json!(true));
        assert_eq!(j["curve"]["genus"], json!(0));
        assert_eq!(j["complex"]["vertices"], json!([[-3, -3, -2], [0, 0, 1], [0, 2, 1], [3, 0, 1]]));
        let text = r.to_string();
        assert!(text.contains("Z/3"));
        assert!(text.contains("(-3,-3,-2) (0,0,1) (0,2,1) (3,0,1)"));
    }

    #[test]
    fn report_round_trips() {
        let r = analyze(&e6()).unwrap().to_json_string();
        let doc: Value = serde_json::from_str(&r).unwrap();
        let again = parse_validate(&doc["input"].to_string()).unwrap();
        assert_eq!(analyze(&again).unwrap().to_json_string(), r);
    }

    #[test]
    fn inapplicable_sections_are_null() {
        // (4),(4),(4) is not log terminal, so no complex and no chain
        let d = DefiningData::two(&[&[4], &[4], &[4]], 0, &[&[-3, 1, 1]]);
        let j = analyze(&d).unwrap().to_json();
        assert_eq!(j["curve"]["genus"], json!(3));
        assert_eq!(j["chain"], Value::Null);
        assert_eq!(j["singularities"]["log_terminal"], json!(false));
    }
}
