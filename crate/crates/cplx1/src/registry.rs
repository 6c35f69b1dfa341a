//! Parameterized defining data of the compound du Val threefolds, the toric
//! ones included, and curated matrices just outside the classification.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::One;
use serde_json::{json, Value};

use crate::acomplex::{discrepancies, leaf_roofs, singularity_type, Discrepancy, Verdict};
use crate::coxiter::{iterate_chain_from_data, Terminal};
use crate::data::{normalize_exponents, DefiningData, ExponentData, Normal, Variant};
use crate::error::{Error, Result};
use crate::gorenstein::gorenstein_data;
use crate::invariants::is_platonic_tuple;
use crate::linalg::{fmt_rat, Int, IntMatrix, Rat};
use crate::polyhedra::{lattice_points, polytope, Mode};

pub type Params = BTreeMap<String, i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// toric, checked by the hollow polygon criterion
    Toric,
    QFactorial,
    NonQFactorial,
    /// canonical multiplicity greater than one
    HighMultiplicity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub min: i64,
    pub default: i64,
}

const fn p(name: &'static str, min: i64, default: i64) -> ParamSpec {
    ParamSpec { name, min, default }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub id: &'static str,
    pub kind: FamilyKind,
    pub params: Vec<ParamSpec>,
    /// number of the singularity in the list of equations
    pub number: &'static str,
    pub cdv_type: &'static str,
    pub equation: &'static str,
    pub note: &'static str,
}

impl RegistryEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "kind": format!("{:?}", self.kind),
            "params": self.params.iter().map(|p| json!({"name": p.name, "min": p.min, "default": p.default})).collect::<Vec<_>>(),
            "number": self.number,
            "cdv_type": self.cdv_type,
            "equation": self.equation,
            "note": self.note,
        })
    }
}

pub fn entries() -> Vec<RegistryEntry> {
    use FamilyKind::*;
    let e = |id, kind, params, number, cdv_type, equation, note| RegistryEntry { id, kind, params, number, cdv_type, equation, note };
    vec![
        e("toric-1", Toric, vec![p("k", 2, 2)], "1", "A_l x C", "T1 T2 + T3^(l+1)", ""),
        e("toric-2", Toric, vec![p("k1", 1, 1), p("k2", 1, 1)], "2", "A_(l1-1), A_(l2-1) -> cA_(l1+l2-1)", "T1 T2 + T3^l1 T4^l2", ""),
        e("toric-3", Toric, vec![], "3", "A_1, A_1, A_1 -> cD_4", "T1^2 + T2 T3 T4", ""),
        e("4", QFactorial, vec![p("k", 2, 2)], "4", "D_(l+3) x C", "T1^2 + T2^2 T3 + T3^(l+2)", ""),
        e("5-o", QFactorial, vec![p("k", 2, 2)], "5", "A_1, A_(l-1) -> cD_(l+4)", "T1^2 + T2^2 T3 + T3 T4^(l+2)", ""),
        e("5-e", QFactorial, vec![p("k", 1, 1)], "5", "A_1, A_(l-1) -> cD_(l+4)", "T1^2 + T2^2 T3 + T3 T4^(l+2)", ""),
        e("6", QFactorial, vec![], "6", "E_6 x C", "T1^2 + T2^3 + T3^4", ""),
        e("7", QFactorial, vec![], "7", "E_7 x C", "T1^2 + T2^3 + T2 T3^3", ""),
        e("8", QFactorial, vec![], "8", "E_8 x C", "T1^2 + T2^3 + T3^5", ""),
        e(
            "9",
            HighMultiplicity,
            vec![p("zeta", 2, 2), p("k", 1, 1), p("r", 2, 2), p("d0", 1, 1), p("d1", 1, 1), p("d2", 1, 1), p("erase_second", 0, 0), p("erase_fourth", 0, 0)],
            "9",
            "cA_L",
            "T1 T2 + ...",
            "further d3, d4, ... for r >= 3 (default 1); erase_second needs k >= 2, erase_fourth needs zeta - k >= 2",
        ),
        e("10-e", NonQFactorial, vec![p("k", 2, 2)], "10", "A_(l+1) -> cD_(l+3)", "T1^2 + T2^2 T3 + T4^(l+2)", ""),
        e("10-o", QFactorial, vec![p("k", 1, 1)], "10", "A_(l+1) -> cD_(l+3)", "T1^2 + T2^2 T3 + T4^(l+2)", ""),
        e("11", QFactorial, vec![p("k", 2, 2)], "11", "A_(2l+1) -> cD_(2l+2)", "T1^2 + T2^2 T3 + T2 T4^(l+1)", ""),
        e("12-e-e", QFactorial, vec![p("k1", 1, 1), p("k2", 1, 1)], "12", "A_(l2-1), D_(l1+2) -> cD_(l1+l2+2)", "T1^2 + T2^2 T3 + T3^(l1+1) T4^l2", ""),
        e(
            "12-o-e/o",
            QFactorial,
            vec![p("k1", 1, 1), p("k2", 1, 1)],
            "12",
            "A_(l2-1), D_(l1+2) -> cD_(l1+l2+2)",
            "T1^2 + T2^2 T3 + T3^(l1+1) T4^l2",
            "third row entry over the odd exponent is k1 - k2",
        ),
        e("13-e", HighMultiplicity, vec![p("zeta", 2, 2)], "13", "A_1, A_1 -> cD_(l+3)", "T1^2 + T2 T3 T4 + T4^(l+2)", ""),
        e("13-o", HighMultiplicity, vec![p("zeta", 3, 3)], "13", "A_1, A_1 -> cD_(l+3)", "T1^2 + T2 T3 T4 + T4^(l+2)", "zeta odd"),
        e("14", HighMultiplicity, vec![], "14", "A_1, A_1, A_2 -> cE_6", "T1^2 + T2^3 + T3^2 T4^2", ""),
        e("15", QFactorial, vec![], "15", "D_4 -> cE_6, cE_7", "T1^2 + T2^3 + T3^3 T4", ""),
        e("16", QFactorial, vec![], "16", "A_1, D_4 -> cE_7", "T1^2 + T2^3 + T2 T3 T4^2", ""),
        e("17", QFactorial, vec![], "17", "A_2, D_4 -> cE_8", "T1^2 + T2^3 + T3^2 T4^3", ""),
        e("18", QFactorial, vec![], "18", "E_6 -> cE_8", "T1^2 + T2^3 + T3 T4^4", ""),
    ]
}

pub fn entry(id: &str) -> Result<RegistryEntry> {
    entries().into_iter().find(|e| e.id == id).ok_or_else(|| Error::pre(format!("unknown registry id {id:?}")))
}

/// Explicit values merged over the defaults; unknown names are rejected.
pub fn resolve_params(id: &str, given: &Params) -> Result<Params> {
    let e = entry(id)?;
    let mut out: Params = e.params.iter().map(|p| (p.name.to_string(), p.default)).collect();
    let r = given.get("r").copied().unwrap_or(2);
    for (k, v) in given {
        let known = out.contains_key(k)
            || (id == "9" && k.strip_prefix('d').and_then(|i| i.parse::<i64>().ok()).is_some_and(|i| i >= 0 && i <= r));
        if !known {
            return Err(Error::pre(format!("family {id} has no parameter {k:?}")));
        }
        out.insert(k.clone(), *v);
    }
    if id == "9" {
        for i in 3..=r {
            out.entry(format!("d{i}")).or_insert(1);
        }
    }
    for spec in &e.params {
        if out[spec.name] < spec.min {
            return Err(Error::pre(format!("parameter {} = {} is below {}", spec.name, out[spec.name], spec.min)));
        }
    }
    Ok(out)
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Defining data from the full matrix `P`; the upper rows must be those
/// determined by the exponents.
fn from_p(variant: Variant, blocks: &[&[i64]], m: usize, rows: &[Vec<i64>]) -> Result<DefiningData> {
    let e = ExponentData::new(variant, blocks.iter().map(|b| ints(b)).collect(), m);
    let r = e.r();
    let p0 = e.p0();
    for (i, row) in rows.iter().take(r).enumerate() {
        if ints(row) != p0.row(i) {
            return Err(Error::internal(format!("row {i} of the registry matrix disagrees with P0")));
        }
    }
    let d = IntMatrix::from_rows(rows[r..].iter().map(|x| ints(x)).collect())?;
    DefiningData::new(e, d, None)
}

fn two(blocks: &[&[i64]], m: usize, rows: &[Vec<i64>]) -> Result<DefiningData> {
    from_p(Variant::Two, blocks, m, rows)
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::pre(msg))
    }
}

/// The defining data of a family member.
pub fn instantiate(id: &str, given: &Params) -> Result<DefiningData> {
    let q = resolve_params(id, given)?;
    let g = |name: &str| q[name];
    match id {
        "toric-1" => {
            let k = g("k");
            from_p(Variant::One, &[&[k]], 2, &[vec![k, 0, 0], vec![0, 0, 1], vec![1, 1, 1]])
        }
        "toric-2" => {
            let (k1, k2) = (g("k1"), g("k2"));
            from_p(Variant::One, &[&[k1, k2]], 2, &[vec![k1, k2, 0, 0], vec![0, 1, 0, 1], vec![1, 1, 1, 1]])
        }
        "toric-3" => from_p(Variant::One, &[&[2]], 2, &[vec![2, 0, 0], vec![0, 0, 2], vec![1, 1, 1]]),
        "4" => {
            let k = g("k");
            two(&[&[k], &[2], &[2]], 1, &[vec![-k, 2, 0, 0], vec![-k, 0, 2, 0], vec![0, 0, 0, 1], vec![1 - k, 1, 1, 1]])
        }
        "5-o" => {
            let k = g("k");
            two(&[&[k], &[2], &[2]], 1, &[vec![-k, 2, 0, 0], vec![-k, 0, 2, 0], vec![1, 0, 0, 0], vec![1 - k, 1, 1, 1]])
        }
        "5-e" => {
            let k = g("k");
            let l = 2 * k + 1;
            two(&[&[l], &[2], &[2]], 1, &[vec![-l, 2, 0, 0], vec![-l, 0, 2, 0], vec![0, 1, 0, k + 1], vec![-2 * k, 1, 1, 1]])
        }
        "6" => two(&[&[3], &[3], &[2]], 1, &[vec![-3, 3, 0, 0], vec![-3, 0, 2, 0], vec![0, 0, 0, 1], vec![-2, 1, 1, 1]]),
        "7" => two(&[&[4], &[3], &[2]], 1, &[vec![-4, 3, 0, 0], vec![-4, 0, 2, 0], vec![0, 0, 0, 1], vec![-3, 1, 1, 1]]),
        "8" => two(&[&[5], &[3], &[2]], 1, &[vec![-5, 3, 0, 0], vec![-5, 0, 2, 0], vec![0, 0, 0, 1], vec![-4, 1, 1, 1]]),
        "9" => series_nine(&q),
        "10-e" => {
            let k = g("k");
            two(
                &[&[k], &[2, 1], &[2, 1]],
                0,
                &[vec![-k, 2, 1, 0, 0], vec![-k, 0, 0, 2, 1], vec![1, 0, 0, 0, 0], vec![1 - k, 1, 1, 1, 1]],
            )
        }
        "10-o" => {
            let k = g("k");
            let l = 2 * k + 1;
            let c = (l + 3).div_euclid(4);
            two(&[&[l], &[2, 1], &[2]], 0, &[vec![-l, 2, 1, 0], vec![-l, 0, 0, 2], vec![0, 1, c, 0], vec![-2 * k, 1, 1, 1]])
        }
        "11" => {
            let k = g("k");
            two(&[&[k], &[2, 1], &[2]], 0, &[vec![-k, 2, 1, 0], vec![-k, 0, 0, 2], vec![1, 0, 0, 0], vec![1 - k, 1, 1, 1]])
        }
        "12-e-e" => {
            let (a, b) = (g("k1"), g("k2"));
            two(&[&[a, b], &[2], &[2]], 0, &[vec![-a, -b, 2, 0], vec![-a, -b, 0, 2], vec![0, 1, 0, 0], vec![1 - a, 1 - b, 1, 1]])
        }
        "12-o-e/o" => {
            let (k1, k2) = (g("k1"), g("k2"));
            let (a, b) = (2 * k1, 2 * k2 + 1);
            let t = twelve_odd_entry(k1, k2);
            two(&[&[a, b], &[2], &[2]], 0, &[vec![-a, -b, 2, 0], vec![-a, -b, 0, 2], vec![0, t, 1, 0], vec![1 - a, -2 * k2, 1, 1]])
        }
        "13-e" => {
            let z = g("zeta");
            let l = 2 * z - 1;
            two(
                &[&[l], &[1, 1], &[1, 1]],
                0,
                &[vec![-l, 1, 1, 0, 0], vec![-l, 0, 0, 1, 1], vec![0, 0, 1, 0, 1], vec![2, 0, 0, 0, 0]],
            )
        }
        "13-o" => {
            let z = g("zeta");
            require(z.is_odd(), "family 13-o needs an odd zeta")?;
            let l = 2 * z - 2;
            two(&[&[l], &[2], &[1, 1]], 0, &[vec![-l, 2, 0, 0], vec![-l, 0, 1, 1], vec![0, 0, 0, 1], vec![z, -1, 0, 0]])
        }
        "14" => two(&[&[3], &[3], &[1, 1]], 0, &[vec![-3, 3, 0, 0], vec![-3, 0, 1, 1], vec![0, 0, 0, 1], vec![-1, 2, 0, 0]]),
        "15" => two(&[&[3, 1], &[3], &[2]], 0, &[vec![-3, -1, 3, 0], vec![-3, -1, 0, 2], vec![1, 2, 0, 0], vec![-2, 0, 1, 1]]),
        "16" => two(&[&[4], &[2, 1], &[2]], 0, &[vec![-4, 2, 1, 0], vec![-4, 0, 0, 2], vec![0, 1, 2, 0], vec![-3, 1, 1, 1]]),
        "17" => two(&[&[3, 2], &[3], &[2]], 0, &[vec![-3, -2, 3, 0], vec![-3, -2, 0, 2], vec![1, 1, 0, 0], vec![-2, -1, 1, 1]]),
        "18" => two(&[&[4, 1], &[3], &[2]], 0, &[vec![-4, -1, 3, 0], vec![-4, -1, 0, 2], vec![1, 3, 0, 0], vec![-3, 0, 1, 1]]),
        _ => Err(Error::pre(format!("unknown registry id {id:?}"))),
    }
}

/// Third row entry over the odd exponent `2 k2 + 1` of the (12-o-e/o) family.
pub fn twelve_odd_entry(k1: i64, k2: i64) -> i64 {
    k1 - k2
}

fn series_nine(q: &Params) -> Result<DefiningData> {
    let (z, k, r) = (q["zeta"], q["k"], q["r"]);
    require(r >= 2, "family 9 needs r >= 2")?;
    require(k < z, "family 9 needs k < zeta")?;
    require(z.gcd(&k) == 1, "family 9 needs coprime zeta and k")?;
    let erase_second = q["erase_second"] != 0;
    let erase_fourth = q["erase_fourth"] != 0;
    require(!erase_second || k >= 2, "erasing the second column needs k >= 2")?;
    require(!erase_fourth || z - k >= 2, "erasing the fourth column needs zeta - k >= 2")?;
    let mu = (1..z).find(|mu| (1 - mu * k).rem_euclid(z) == 0).expect("k is invertible mod zeta");
    let a = (1 - mu * k) / z;
    let ru = r as usize;
    let d: Vec<i64> = (0..=ru).map(|i| q[&format!("d{i}")]).collect();
    if let Some(x) = d.iter().find(|x| **x < 1) {
        return Err(Error::pre(format!("family 9 needs positive d entries, got {x}")));
    }
    // columns per block before erasure: (upper part, d-row entry, last-row entry)
    let mut blocks: Vec<Vec<i64>> = Vec::new();
    let mut lower: Vec<Vec<(i64, i64)>> = Vec::new();
    for i in 0..=ru {
        let l = match i {
            0 => k,
            1 => z - k,
            _ => 1,
        };
        let last = match i {
            0 => a,
            1 => a + mu,
            _ => 0,
        };
        let erase = (i == 0 && erase_second) || (i == 1 && erase_fourth);
        let mut b = vec![l];
        let mut low = vec![(0, last)];
        if !erase {
            b.push(l);
            low.push((d[i], last));
        }
        blocks.push(b);
        lower.push(low);
    }
    let refs: Vec<&[i64]> = blocks.iter().map(Vec::as_slice).collect();
    let e = ExponentData::new(Variant::Two, blocks.iter().map(|b| ints(b)).collect(), 0);
    let mut rows: Vec<Vec<i64>> = e.p0().to_rows().iter().map(|row| row.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
    rows.push(lower.iter().flatten().map(|x| x.0).collect());
    rows.push(lower.iter().flatten().map(|x| x.1).collect());
    two(&refs, 0, &rows)
}

/// Parameter bound of the standard sweep: 6, and zeta <= 5 for family 9.
pub fn default_bound(id: &str) -> i64 {
    if id == "9" {
        5
    } else {
        6
    }
}

/// All parameter choices of a family with every parameter at most `bound`.
/// Family 9 additionally caps `r` at 4 and the `d` entries at 3.
pub fn parameter_grid(id: &str, bound: i64) -> Result<Vec<Params>> {
    let e = entry(id)?;
    let mk = |pairs: &[(&str, i64)]| -> Params { pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect() };
    let range = |lo: i64| lo..=bound.max(lo);
    let out = match id {
        "9" => {
            let mut out = Vec::new();
            for z in 2..=bound.max(2) {
                for k in (1..z).filter(|k| k.gcd(&z) == 1) {
                    for r in 2..=bound.clamp(2, 4) {
                        let dmax = bound.clamp(1, 3);
                        for ds in product(r as usize + 1, 1, dmax) {
                            for es in [0, 1] {
                                for ef in [0, 1] {
                                    if (es == 1 && k < 2) || (ef == 1 && z - k < 2) {
                                        continue;
                                    }
                                    let mut q = mk(&[("zeta", z), ("k", k), ("r", r), ("erase_second", es), ("erase_fourth", ef)]);
                                    for (i, d) in ds.iter().enumerate() {
                                        q.insert(format!("d{i}"), *d);
                                    }
                                    out.push(q);
                                }
                            }
                        }
                    }
                }
            }
            out
        }
        "13-o" => range(3).filter(|z| z % 2 == 1).map(|z| mk(&[("zeta", z)])).collect(),
        _ => match e.params.len() {
            0 => vec![Params::new()],
            1 => range(e.params[0].min).map(|v| mk(&[(e.params[0].name, v)])).collect(),
            2 => {
                let (a, b) = (&e.params[0], &e.params[1]);
                range(a.min).flat_map(|x| range(b.min).map(move |y| mk(&[(a.name, x), (b.name, y)]))).collect()
            }
            _ => return Err(Error::internal(format!("no grid for {id}"))),
        },
    };
    Ok(out)
}

/// All vectors of the given length with entries in `lo..=hi`.
fn product(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (lo..=hi).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Interior lattice points of the polygon of the columns at height one.
pub fn hollow_witnesses(data: &DefiningData) -> Result<Vec<Vec<Int>>> {
    let cols = data.columns();
    let dim = data.r() + data.s();
    if dim != 3 || cols.iter().any(|c| !c[2].is_one()) {
        return Err(Error::pre("the hollow polygon test needs columns at height one in dimension three"));
    }
    let pts: Vec<Vec<Rat>> = cols.iter().map(|c| c[..2].iter().cloned().map(Rat::from_integer).collect()).collect();
    lattice_points(&polytope(&pts)?, Mode::Interior)
}

pub fn fmt_params(q: &Params) -> String {
    q.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

/// Check one family member; `Err` describes the first failing property.
pub fn verify_instance(id: &str, q: &Params) -> std::result::Result<(), String> {
    let e = entry(id).map_err(|e| e.to_string())?;
    let data = instantiate(id, q).map_err(|e| format!("invalid: {e}"))?;
    if e.kind == FamilyKind::Toric {
        let w = hollow_witnesses(&data).map_err(|e| e.to_string())?;
        return if w.is_empty() { Ok(()) } else { Err(format!("polygon is not hollow: {w:?}")) };
    }
    let g = gorenstein_data(&data).map_err(|e| e.to_string())?;
    if !g.q_gorenstein || !g.iota.is_one() {
        return Err(format!("not Gorenstein (iota = {})", g.iota));
    }
    let zeta_ok = match id {
        "9" => g.zeta == Int::from(q["zeta"]),
        "13-e" | "13-o" | "14" => g.zeta > Int::one(),
        _ => g.zeta.is_one(),
    };
    if !zeta_ok {
        return Err(format!("unexpected zeta {}", g.zeta));
    }
    let s = singularity_type(&data).map_err(|e| e.to_string())?;
    if s.log_terminal != Verdict::Yes || s.canonical != Verdict::Yes {
        return Err(format!("not canonical: {:?}", s.canonical_witnesses));
    }
    if s.cdv != Verdict::Yes {
        return Err(format!("not compound du Val: {:?}", s.cdv_witnesses));
    }
    let chain = iterate_chain_from_data(&data, 10).map_err(|e| e.to_string())?;
    if let Some(expect) = expected_chain(id, q) {
        if chain.states != expect {
            return Err("unexpected Cox ring chain".to_string());
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub id: String,
    pub checked: usize,
    /// first failing instance and the reason
    pub failure: Option<(Params, String)>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn verify_family(id: &str, bound: i64) -> Result<FamilyReport> {
    let mut checked = 0;
    for q in parameter_grid(id, bound)? {
        checked += 1;
        if let Err(why) = verify_instance(id, &q) {
            return Ok(FamilyReport { id: id.into(), checked, failure: Some((q, why)) });
        }
    }
    Ok(FamilyReport { id: id.into(), checked, failure: None })
}

fn ring(blocks: &[&[i64]], m: usize) -> Normal<ExponentData> {
    Normal::Ring(ExponentData::two(blocks, m))
}

/// Cox ring chains known in closed form.
pub fn expected_chain(id: &str, q: &Params) -> Option<Vec<Normal<ExponentData>>> {
    Some(match id {
        "6" => vec![ring(&[&[3], &[3], &[2]], 1), ring(&[&[2], &[2], &[2]], 1), Normal::Polynomial(3)],
        "7" => vec![ring(&[&[4], &[3], &[2]], 1), ring(&[&[3], &[3], &[2]], 1), ring(&[&[2], &[2], &[2]], 1), Normal::Polynomial(3)],
        "8" => vec![ring(&[&[5], &[3], &[2]], 1)],
        "15" => vec![ring(&[&[3, 1], &[3], &[2]], 0)],
        "17" => vec![ring(&[&[3, 2], &[3], &[2]], 0)],
        "18" => vec![ring(&[&[4, 1], &[3], &[2]], 0)],
        "10-e" if q.get("k") == Some(&2) => vec![ring(&[&[2, 1], &[2, 1], &[2]], 0)],
        _ => return None,
    })
}

/// Whether the Cox ring of the variety is already factorial.
pub fn is_factorial_endpoint(data: &DefiningData) -> Result<bool> {
    let chain = iterate_chain_from_data(data, 10)?;
    Ok(chain.terminal == Terminal::Factorial && chain.len() == 1)
}

/// A matrix excluded by the classification together with a lattice point
/// that violates the compound du Val condition.
#[derive(Clone, Debug)]
pub struct NearMiss {
    pub label: &'static str,
    pub data: DefiningData,
    pub witness: Vec<Int>,
}

/// Base leading blocks with an extra column.
fn with_column(blocks: &[&[i64]], base_third: [i64; 3], base_last: [i64; 3], extra: Extra) -> DefiningData {
    let (l0, l1, l2) = (blocks[0][0], blocks[1][0], blocks[2][0]);
    let mut b: Vec<Vec<i64>> = vec![vec![l0], vec![l1], vec![l2]];
    let mut third = [vec![base_third[0]], vec![base_third[1]], vec![base_third[2]]];
    let mut last = [vec![base_last[0]], vec![base_last[1]], vec![base_last[2]]];
    let mut m = 0;
    let mut free = None;
    match extra {
        Extra::Leaf(i, k, t, u) => {
            b[i].push(k);
            third[i].push(t);
            last[i].push(u);
        }
        Extra::Free(t, u) => {
            m = 1;
            free = Some((t, u));
        }
    }
    let mut third: Vec<i64> = third.concat();
    let mut last: Vec<i64> = last.concat();
    if let Some((t, u)) = free {
        third.push(t);
        last.push(u);
    }
    let refs: Vec<&[i64]> = b.iter().map(Vec::as_slice).collect();
    DefiningData::two(&refs, m, &[&third, &last])
}

#[derive(Clone, Copy)]
enum Extra {
    /// block, exponent, third and last row entry
    Leaf(usize, i64, i64, i64),
    /// third and last row entry of a free column
    Free(i64, i64),
}

pub fn near_misses() -> Vec<NearMiss> {
    use Extra::*;
    let w = |v: [i64; 4]| ints(&v);
    let e8 = |x| with_column(&[&[5], &[3], &[2]], [0, 0, 0], [-4, 1, 1], x);
    let e7 = |x| with_column(&[&[4], &[3], &[2]], [0, 0, 0], [-3, 1, 1], x);
    let e7d = |x| with_column(&[&[4], &[3], &[2]], [1, 0, 0], [-3, 1, 1], x);
    let e6 = |x| with_column(&[&[3], &[3], &[2]], [0, 0, 0], [-2, 1, 1], x);
    let e6d = |x| with_column(&[&[3], &[3], &[2]], [1, 0, 0], [-2, 1, 1], x);
    let d = |l: i64, x| with_column(&[&[l], &[2], &[2]], [0, 0, 0], [1 - l, 1, 1], x);
    let dd = |l: i64, x| with_column(&[&[l], &[2], &[2]], [1, 0, 0], [1 - l, 1, 1], x);
    vec![
        NearMiss { label: "(5,3,2) free column at height 2", data: e8(Free(2, 1)), witness: w([0, 0, 1, 1]) },
        NearMiss { label: "(5,3,2) extra column (-1,-1,1,0) in leaf 0", data: e8(Leaf(0, 1, 1, 0)), witness: w([0, 0, 1, 1]) },
        NearMiss { label: "(5,3,2) extra column (1,0,2,1) in leaf 1", data: e8(Leaf(1, 1, 2, 1)), witness: w([0, 0, 1, 1]) },
        NearMiss { label: "(5,3,2) extra column (0,1,2,1) in leaf 2", data: e8(Leaf(2, 1, 2, 1)), witness: w([0, 0, 1, 1]) },
        NearMiss { label: "(4,3,2) free column at height 2", data: e7(Free(2, 1)), witness: w([0, 0, 1, 1]) },
        NearMiss { label: "(4,3,2) extra column (-1,-1,1,0) in leaf 0", data: e7(Leaf(0, 1, 1, 0)), witness: w([0, 0, 1, 1]) },
        NearMiss { label: "(4,3,2) extra column (1,0,1,1) in leaf 1", data: e7(Leaf(1, 1, 1, 1)), witness: w([0, 0, 1, 1]) },
        NearMiss { label: "(4,3,2;1,0,0) extra column (-1,-1,4,0)", data: e7d(Leaf(0, 1, 4, 0)), witness: w([-1, -1, 3, 0]) },
        NearMiss { label: "(4,3,2;1,0,0) extra column (-3,-3,1,-2)", data: e7d(Leaf(0, 3, 1, -2)), witness: w([-1, -1, 2, 0]) },
        NearMiss { label: "(4,3,2;1,0,0) extra column (0,1,2,1)", data: e7d(Leaf(2, 1, 2, 1)), witness: w([-1, -1, 3, 0]) },
        NearMiss { label: "(4,3,2;1,0,0) free column (0,0,1,1)", data: e7d(Free(1, 1)), witness: w([-1, -1, 2, 0]) },
        NearMiss { label: "(3,3,2) extra column (-1,-1,1,0) in leaf 0", data: e6(Leaf(0, 1, 1, 0)), witness: w([0, 0, 1, 1]) },
        NearMiss { label: "(3,3,2) extra column (0,1,1,1) in leaf 2", data: e6(Leaf(2, 1, 1, 1)), witness: w([0, 0, 1, 1]) },
        NearMiss { label: "(3,3,2;1,0,0) free column (0,0,1,1)", data: e6d(Free(1, 1)), witness: w([1, 0, 1, 1]) },
        NearMiss { label: "(3,2,2) extra column (-1,-1,2,0)", data: d(3, Leaf(0, 1, 2, 0)), witness: w([0, 0, 1, 1]) },
        NearMiss { label: "(3,2,2) extra column (1,0,1,1) in leaf 1", data: d(3, Leaf(1, 1, 1, 1)), witness: w([0, 0, 1, 1]) },
        NearMiss { label: "(3,2,2;1,0,0) extra column (-1,-1,-1,0)", data: dd(3, Leaf(0, 1, -1, 0)), witness: w([0, 0, 0, 1]) },
        NearMiss { label: "(3,2,2;1,0,0) extra column (2,0,1,1) in leaf 1", data: dd(3, Leaf(1, 2, 1, 1)), witness: w([0, 0, 2, 1]) },
    ]
}

/// Data invariant under admissible operations, used to compare search
/// survivors with registry members.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub exponents: String,
    pub class_group: String,
    pub zeta: Int,
    pub discrepancies: Vec<String>,
    pub roof_counts: Vec<usize>,
}

impl Fingerprint {
    pub fn to_json(&self) -> Value {
        json!({
            "exponents": self.exponents,
            "class_group": self.class_group,
            "zeta": self.zeta.to_string(),
            "discrepancies": self.discrepancies,
            "roof_lattice_counts": self.roof_counts,
        })
    }
}

pub fn fingerprint(data: &DefiningData) -> Result<Fingerprint> {
    let (normal, _) = normalize_exponents(&data.exponents);
    let g = gorenstein_data(data)?;
    let mut disc: Vec<String> = discrepancies(data)?
        .into_iter()
        .map(|(_, d)| match d {
            Discrepancy::Value(q) => fmt_rat(&q),
            Discrepancy::AtMostMinusOne => "<=-1".to_string(),
        })
        .collect();
    disc.sort();
    let mut roof_counts = Vec::new();
    for roof in leaf_roofs(data)? {
        roof_counts.push(lattice_points(&roof.roof, Mode::Closed)?.len());
    }
    roof_counts.sort();
    Ok(Fingerprint { exponents: normal.to_string(), class_group: data.class_group().to_string(), zeta: g.zeta, discrepancies: disc, roof_counts })
}

#[derive(Clone, Debug)]
pub struct SearchHit {
    pub fingerprint: Fingerprint,
    pub example: DefiningData,
    /// registry family and parameters with the same fingerprint
    pub matches: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub bound: i64,
    pub candidates: usize,
    pub survivors: usize,
    pub hits: Vec<SearchHit>,
}

impl SearchReport {
    pub fn unmatched(&self) -> impl Iterator<Item = &SearchHit> {
        self.hits.iter().filter(|h| h.matches.is_empty())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bound": self.bound,
            "candidates": self.candidates,
            "survivors": self.survivors,
            "classes": self.hits.iter().map(|h| json!({
                "fingerprint": h.fingerprint.to_json(),
                "example": h.example.to_json(),
                "matches": h.matches,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Exponent shapes of 4 x 4 matrices of non-toric threefolds with a
/// platonic leading triple and entries at most 6.
fn search_shapes() -> Vec<(Vec<Vec<i64>>, usize)> {
    let mut out = BTreeSet::new();
    for a in 1..=6i64 {
        for b in 1..=6 {
            for c in 1..=6 {
                if !is_platonic_tuple(&ints(&[a, b, c])) {
                    continue;
                }
                if b >= c {
                    out.insert((vec![vec![a], vec![b], vec![c]], 1));
                }
                for x in 1..=a {
                    // a two-column block in position 0 or 1
                    out.insert((vec![vec![a, x], vec![b], vec![c]], 0));
                    if a >= b {
                        out.insert((vec![vec![b], vec![a, x], vec![c]], 0));
                    }
                }
            }
        }
    }
    out.into_iter()
        .filter(|(b, m)| {
            let e = ExponentData::new(Variant::Two, b.iter().map(|x| ints(x)).collect(), *m);
            !normalize_exponents(&e).0.is_polynomial()
        })
        .collect()
}

/// Bounded brute force over 4 x 4 matrices of canonical multiplicity one.
///
/// The last row is fixed to the shape forced by Gorenstein index one and
/// canonical multiplicity one; the third row runs over `[-bound, bound]`.
pub fn search(bound: i64) -> Result<SearchReport> {
    let mut known: Vec<(Fingerprint, String)> = Vec::new();
    for id in ["4", "5-o", "5-e", "6", "7", "8", "10-o", "11", "12-e-e", "12-o-e/o", "15", "16", "17", "18"] {
        for q in parameter_grid(id, 6)? {
            let d = instantiate(id, &q)?;
            known.push((fingerprint(&d)?, format!("{id}({})", fmt_params(&q))));
        }
    }
    let mut candidates = 0;
    let mut survivors = 0;
    let mut classes: BTreeMap<Fingerprint, DefiningData> = BTreeMap::new();
    for (blocks, m) in search_shapes() {
        let refs: Vec<&[i64]> = blocks.iter().map(Vec::as_slice).collect();
        let mut last: Vec<i64> = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            last.extend(b.iter().map(|l| if i == 0 { 1 - l } else { 1 }));
        }
        last.extend(std::iter::repeat_n(1, m));
        for third in product(4, -bound, bound) {
            candidates += 1;
            let Ok(d) = DefiningData::try_two(&refs, m, &[&third, &last]) else { continue };
            if !d.affine_profile()?.pointed {
                continue;
            }
            let g = gorenstein_data(&d)?;
            if !g.q_gorenstein || !g.iota.is_one() || !g.zeta.is_one() {
                continue;
            }
            if singularity_type(&d)?.cdv != Verdict::Yes {
                continue;
            }
            survivors += 1;
            classes.entry(fingerprint(&d)?).or_insert(d);
        }
    }
    let hits = classes
        .into_iter()
        .map(|(fp, example)| {
            let matches = known.iter().filter(|(k, _)| *k == fp).map(|(_, name)| name.clone()).collect();
            SearchHit { fingerprint: fp, example, matches }
        })
        .collect();
    Ok(SearchReport { bound, candidates, survivors, hits })
}
