//! The anticanonical complex of an affine variety of variant 2: elementary
//! cones, discrepancies, roof pieces, and the singularity tests built on
//! their lattice points.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::data::{rat_json, DefiningData, Variant};
use crate::error::{Error, Result};
use crate::gorenstein::{gorenstein_data, GorensteinData};
use crate::invariants::is_platonic_ring;
use crate::linalg::{dot_mixed, fmt_rat, gcd_all, Int, Rat};
use crate::polyhedra::{cone_hull, lattice_points, polytope, Cone, Mode, Polytope};

/// One elementary cone: a choice of one column per block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryCone {
    /// index of the chosen column inside each block
    pub choice: Vec<usize>,
    /// product of the chosen exponents divided by the own one
    pub ell_i: Vec<Int>,
    /// `(1 - r) prod + sum ell_i`
    pub ell: Int,
    /// `sum ell_i v_i`
    pub v: Vec<Int>,
    /// gcd of `v`
    pub c: Int,
    /// `v / ell`, present when `ell > 0`
    pub v_prime: Option<Vec<Rat>>,
}

fn choices(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &k in sizes {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..k).map(move |j| {
                    let mut q = p.clone();
                    q.push(j);
                    q
                })
            })
            .collect();
    }
    out
}

fn require_two(data: &DefiningData) -> Result<()> {
    if data.variant() != Variant::Two {
        return Err(Error::Unsupported("the anticanonical complex is implemented for variant 2 only".into()));
    }
    Ok(())
}

pub fn elementary_cones(data: &DefiningData) -> Result<Vec<ElementaryCone>> {
    require_two(data)?;
    let blocks = data.blocks();
    let cols = data.columns();
    let r = Int::from(data.r() as i64);
    let mut out = Vec::new();
    for choice in choices(&blocks.iter().map(Vec::len).collect::<Vec<_>>()) {
        let ls: Vec<&Int> = choice.iter().enumerate().map(|(i, &j)| &blocks[i][j]).collect();
        let prod: Int = ls.iter().copied().product();
        let ell_i: Vec<Int> = ls.iter().map(|l| &prod / *l).collect();
        let ell = (Int::one() - &r) * &prod + ell_i.iter().sum::<Int>();
        let mut v = vec![Int::zero(); cols[0].len()];
        for (i, &j) in choice.iter().enumerate() {
            let col = &cols[data.column_index(i, j)];
            for (x, y) in v.iter_mut().zip(col) {
                *x += &ell_i[i] * y;
            }
        }
        if v.iter().all(Zero::is_zero) {
            continue;
        }
        let c = gcd_all(&v);
        let v_prime = ell.is_positive().then(|| v.iter().map(|x| Rat::new(x.clone(), ell.clone())).collect());
        out.push(ElementaryCone { choice, ell_i, ell, v, c, v_prime });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Discrepancy {
    Value(Rat),
    /// elementary cones with `ell <= 0`
    AtMostMinusOne,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Discrepancy::Value(q) => write!(f, "{}", fmt_rat(q)),
            Discrepancy::AtMostMinusOne => write!(f, "<= -1"),
        }
    }
}

fn require_q_gorenstein(data: &DefiningData) -> Result<GorensteinData> {
    let g = gorenstein_data(data)?;
    if !g.q_gorenstein {
        return Err(Error::pre("the variety is not Q-Gorenstein"));
    }
    Ok(g)
}

/// Discrepancy along the primitive ray of each elementary cone.
pub fn discrepancies(data: &DefiningData) -> Result<Vec<(Vec<Int>, Discrepancy)>> {
    require_q_gorenstein(data)?;
    Ok(elementary_cones(data)?
        .into_iter()
        .map(|e| {
            let ray: Vec<Int> = e.v.iter().map(|x| x / &e.c).collect();
            let d = if e.ell.is_positive() {
                Discrepancy::Value(Rat::new(e.ell.clone(), e.c.clone()) - Rat::one())
            } else {
                Discrepancy::AtMostMinusOne
            };
            (ray, d)
        })
        .collect())
}

/// Log terminality: always for variant 1, platonic exponents for variant 2.
pub fn is_log_terminal(data: &DefiningData) -> Result<bool> {
    if data.variant() == Variant::One {
        return Ok(true);
    }
    require_q_gorenstein(data)?;
    Ok(platonic(data))
}

fn platonic(data: &DefiningData) -> bool {
    is_platonic_ring(&data.exponents).expect("variant 2")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Leaf {
    Block(usize),
    Lineality,
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Block(i) => write!(f, "leaf {i}"),
            Leaf::Lineality => write!(f, "lineality"),
        }
    }
}

/// Roof piece over one leaf of the tropical variety.
#[derive(Clone, Debug)]
pub struct LeafRoof {
    pub leaf: Leaf,
    /// integral functional `a` and value `b` with the roof on `a.x = b`
    pub plane: (Vec<Int>, Int),
    /// the roof polytope
    pub roof: Polytope,
    /// the full piece of the complex over the leaf, the roof coned to 0
    pub piece: Polytope,
    /// lattice points of the roof in the strict interior of the cone over the columns
    pub interior_lattice_points: Vec<Vec<Int>>,
}

impl LeafRoof {
    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.roof.vertices
    }
}

/// Integral functional of the roof over each leaf and the vertex lists.
struct Complex {
    leaves: Vec<(Leaf, Vec<Int>, Int, Vec<Vec<Rat>>)>,
    sigma: Cone,
}

fn to_rat(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

fn build_complex(data: &DefiningData, g: &GorensteinData) -> Result<Complex> {
    let cones = elementary_cones(data)?;
    let r = data.r();
    let cols = data.columns();
    let sigma = cone_hull(&cols)?;
    // F(x) = <-u, x> on leaves 1..r, corrected on leaf 0
    let anti: Vec<Rat> = g.u.iter().map(|q| -q).collect();
    let iota = Rat::from_integer(g.iota.clone());
    let scaled = |a: &[Rat]| -> Vec<Int> { a.iter().map(|q| (q * &iota).to_integer()).collect() };
    let mut lineality_vertices: Vec<Vec<Rat>> = Vec::new();
    for e in &cones {
        let Some(vp) = &e.v_prime else { continue };
        if dot_rat_vec(&anti, vp) != Rat::one() {
            return Err(Error::internal("a vertex of the lineality part is off the roof"));
        }
        if !lineality_vertices.contains(vp) {
            lineality_vertices.push(vp.clone());
        }
    }
    let n = data.n();
    let free: Vec<Vec<Rat>> = cols[n..].iter().map(|c| to_rat(c)).collect();
    if free.len() + lineality_vertices.len() > 2 {
        // several v' may lie on one edge of the lineality part
        let all: Vec<Vec<Rat>> = free.iter().chain(&lineality_vertices).cloned().collect();
        let hull = polytope(&all)?;
        lineality_vertices.retain(|v| hull.vertices.contains(v));
    }
    let mut leaves = Vec::new();
    let off = data.offsets();
    for i in 0..data.blocks().len() {
        let mut a = anti.clone();
        if i == 0 {
            a[0] -= Rat::from_integer(Int::from(r as i64 - 1));
        }
        let mut verts: Vec<Vec<Rat>> = (0..data.blocks()[i].len()).map(|j| to_rat(&cols[off[i] + j])).collect();
        verts.extend(free.iter().cloned());
        verts.extend(lineality_vertices.iter().cloned());
        for v in &verts {
            if dot_rat_vec(&a, v) != Rat::one() {
                return Err(Error::internal(format!("a roof vertex of leaf {i} is off its plane")));
            }
        }
        leaves.push((Leaf::Block(i), scaled(&a), g.iota.clone(), verts));
    }
    let mut lin = free;
    lin.extend(lineality_vertices);
    if !lin.is_empty() {
        leaves.push((Leaf::Lineality, scaled(&anti), g.iota.clone(), lin));
    }
    Ok(Complex { leaves, sigma })
}

fn dot_rat_vec(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn require_roof_preconditions(data: &DefiningData) -> Result<GorensteinData> {
    require_two(data)?;
    let g = require_q_gorenstein(data)?;
    if !platonic(data) {
        return Err(Error::pre("the variety is not log terminal"));
    }
    if data.s() > 2 {
        return Err(Error::Unsupported(format!("roof pieces in dimension {}", data.dimension())));
    }
    Ok(g)
}

/// Roof pieces over each leaf and over the lineality part.
pub fn leaf_roofs(data: &DefiningData) -> Result<Vec<LeafRoof>> {
    let g = require_roof_preconditions(data)?;
    let complex = build_complex(data, &g)?;
    let origin = vec![Rat::zero(); data.r() + data.s()];
    let mut out = Vec::new();
    for (leaf, a, b, verts) in complex.leaves {
        let roof = polytope(&verts)?;
        for v in &verts {
            if !roof.vertices.contains(v) {
                return Err(Error::internal(format!("claimed vertex of the {leaf} roof is not extreme")));
            }
        }
        let mut with_origin = verts.clone();
        with_origin.push(origin.clone());
        let piece = polytope(&with_origin)?;
        let mut interior = Vec::new();
        for x in lattice_points(&roof, Mode::Closed)? {
            if complex.sigma.contains_int(&x, Mode::Interior)? {
                interior.push(x);
            }
        }
        out.push(LeafRoof { leaf, plane: (a, b), roof, piece, interior_lattice_points: interior });
    }
    Ok(out)
}

/// Verdict of one singularity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }

    pub fn to_json(self) -> Value {
        match self {
            Verdict::Yes => json!(true),
            Verdict::No => json!(false),
            Verdict::NotApplicable => Value::Null,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::NotApplicable => "n/a",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityReport {
    pub log_terminal: Verdict,
    pub canonical: Verdict,
    pub terminal: Verdict,
    pub cdv: Verdict,
    /// lattice points of the complex below the roof
    pub canonical_witnesses: Vec<Vec<Int>>,
    /// lattice points of the complex besides 0 and the columns
    pub terminal_witnesses: Vec<Vec<Int>>,
    /// roof lattice points in the interior of the cone over the columns
    pub cdv_witnesses: Vec<Vec<Int>>,
}

/// Log terminal, canonical, terminal and compound du Val verdicts.
pub fn singularity_type(data: &DefiningData) -> Result<SingularityReport> {
    let na = SingularityReport {
        log_terminal: Verdict::NotApplicable,
        canonical: Verdict::NotApplicable,
        terminal: Verdict::NotApplicable,
        cdv: Verdict::NotApplicable,
        canonical_witnesses: vec![],
        terminal_witnesses: vec![],
        cdv_witnesses: vec![],
    };
    if data.variant() == Variant::One {
        return Ok(SingularityReport { log_terminal: Verdict::Yes, ..na });
    }
    let g = gorenstein_data(data)?;
    if !g.q_gorenstein {
        return Ok(na);
    }
    if !platonic(data) {
        let no = if data.s() == 2 { Verdict::No } else { Verdict::NotApplicable };
        return Ok(SingularityReport { log_terminal: Verdict::No, canonical: Verdict::No, terminal: Verdict::No, cdv: no, ..na });
    }
    if data.s() > 2 {
        return Ok(SingularityReport { log_terminal: Verdict::Yes, ..na });
    }
    let roofs = leaf_roofs(data)?;
    let cols: BTreeSet<Vec<Int>> = data.columns().into_iter().collect();
    let mut below = BTreeSet::new();
    let mut extra = BTreeSet::new();
    for roof in roofs.iter().filter(|l| l.leaf != Leaf::Lineality) {
        let (a, b) = &roof.plane;
        for x in lattice_points(&roof.piece, Mode::Closed)? {
            if x.iter().all(Zero::is_zero) {
                continue;
            }
            if &crate::linalg::dot(a, &x) < b {
                below.insert(x.clone());
            }
            if !cols.contains(&x) {
                extra.insert(x);
            }
        }
    }
    let canonical = below.is_empty();
    let terminal = canonical && extra.is_empty();
    let (cdv, cdv_witnesses) = if data.s() == 2 && g.iota.is_one() {
        let w = cdv_points(&roofs);
        (Verdict::from_bool(w.is_empty()), w)
    } else if data.s() == 2 {
        (Verdict::No, vec![])
    } else {
        (Verdict::NotApplicable, vec![])
    };
    Ok(SingularityReport {
        log_terminal: Verdict::Yes,
        canonical: Verdict::from_bool(canonical),
        terminal: Verdict::from_bool(terminal),
        cdv,
        canonical_witnesses: below.into_iter().collect(),
        terminal_witnesses: extra.into_iter().collect(),
        cdv_witnesses,
    })
}

fn cdv_points(roofs: &[LeafRoof]) -> Vec<Vec<Int>> {
    let set: BTreeSet<Vec<Int>> = roofs.iter().flat_map(|l| l.interior_lattice_points.iter().cloned()).collect();
    set.into_iter().collect()
}

/// Compound du Val test for Gorenstein log terminal threefolds: no roof
/// lattice point in the interior of the cone over the columns.
pub fn is_cdv(data: &DefiningData) -> Result<(bool, Vec<Vec<Int>>)> {
    if data.s() != 2 {
        return Err(Error::pre("the compound du Val test needs a threefold"));
    }
    let g = require_roof_preconditions(data)?;
    if !g.iota.is_one() {
        return Err(Error::pre(format!("the variety has Gorenstein index {}", g.iota)));
    }
    let w = cdv_points(&leaf_roofs(data)?);
    Ok((w.is_empty(), w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Off,
}

/// Roof vertices and faces of the complex, exactly as JSON or approximately
/// as an OFF mesh.
pub fn export_complex(data: &DefiningData, format: ExportFormat) -> Result<String> {
    let roofs = leaf_roofs(data)?;
    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    let index = |v: &Vec<Rat>, vertices: &mut Vec<Vec<Rat>>| -> usize {
        match vertices.iter().position(|w| w == v) {
            Some(k) => k,
            None => {
                vertices.push(v.clone());
                vertices.len() - 1
            }
        }
    };
    let mut faces = Vec::new();
    let mut lineality = None;
    for roof in &roofs {
        let face: Vec<usize> = roof.roof.boundary_cycle().iter().map(|&k| index(&roof.roof.vertices[k], &mut vertices)).collect();
        match roof.leaf {
            Leaf::Block(i) => faces.push((i, face)),
            Leaf::Lineality => lineality = Some(face),
        }
    }
    let ambient = data.r() + data.s();
    match format {
        ExportFormat::Json => {
            let doc = json!({
                "ambient_dimension": ambient,
                "vertices": vertices.iter().map(|v| v.iter().map(rat_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "faces": faces.iter().map(|(i, f)| json!({ "leaf": i, "vertices": f })).collect::<Vec<_>>(),
                "lineality": lineality,
            });
            Ok(serde_json::to_string_pretty(&doc).expect("json values serialize"))
        }
        ExportFormat::Off => {
            let mut all: Vec<&Vec<usize>> = faces.iter().map(|(_, f)| f).collect();
            if let Some(l) = &lineality {
                all.push(l);
            }
            let mut s = String::new();
            if ambient == 3 {
                s.push_str("OFF\n");
            } else {
                s.push_str(&format!("nOFF\n{ambient}\n"));
            }
            s.push_str(&format!("{} {} 0\n", vertices.len(), all.len()));
            for v in &vertices {
                let line: Vec<String> = v.iter().map(decimal).collect();
                s.push_str(&line.join(" "));
                s.push('\n');
            }
            for f in all {
                let idx: Vec<String> = f.iter().map(|k| k.to_string()).collect();
                s.push_str(&format!("{} {}\n", f.len(), idx.join(" ")));
            }
            Ok(s)
        }
    }
}

fn decimal(q: &Rat) -> String {
    let x = q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN);
    let s = format!("{:.*e}", 11, x);
    // 12 significant digits, trailing zeros trimmed
    let v: f64 = s.parse().unwrap_or(x);
    let mut out = format!("{v}");
    if out == "-0" {
        out = "0".into();
    }
    out
}

/// Dot product of a rational functional with an integer point.
pub fn evaluate(a: &[Rat], x: &[Int]) -> Rat {
    dot_mixed(a, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ints, rat_frac};
    use crate::polyhedra::cone_from_inequalities;
    use proptest::prelude::*;

    fn e6() -> DefiningData {
        DefiningData::two(&[&[3], &[3], &[2]], 0, &[&[-2, 1, 1]])
    }

    fn m8(t: i64) -> DefiningData {
        DefiningData::two(&[&[5], &[3], &[2]], 1, &[&[0, 0, 0, t], &[-4, 1, 1, 1]])
    }

    fn m4(k: i64) -> DefiningData {
        DefiningData::two(&[&[k], &[2], &[2]], 1, &[&[0, 0, 0, 1], &[1 - k, 1, 1, 1]])
    }

    #[test]
    fn e6_cone() {
        let c = elementary_cones(&e6()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].ell_i, ints(&[6, 6, 9]));
        assert_eq!(c[0].ell, Int::from(3));
        assert_eq!(c[0].v, ints(&[0, 0, 3]));
        assert_eq!(c[0].v_prime, Some(vec![Rat::zero(), Rat::zero(), Rat::one()]));
        let d = discrepancies(&e6()).unwrap();
        assert_eq!(d, vec![(ints(&[0, 0, 1]), Discrepancy::Value(Rat::zero()))]);
    }

    #[test]
    fn matrix_four_cone() {
        let c = elementary_cones(&m4(3)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].ell, Int::from(4));
        assert_eq!(c[0].v, ints(&[0, 0, 0, 4]));
        assert_eq!(discrepancies(&m4(3)).unwrap()[0].1, Discrepancy::Value(Rat::zero()));
    }

    #[test]
    fn ten_e_has_four_cones() {
        let d = DefiningData::two(&[&[2], &[2, 1], &[2, 1]], 0, &[&[1, 0, 0, 0, 0], &[-1, 1, 1, 1, 1]]);
        assert_eq!(elementary_cones(&d).unwrap().len(), 4);
    }

    #[test]
    fn non_platonic_discrepancy() {
        let d = DefiningData::two(&[&[4], &[4], &[4]], 0, &[&[-3, 1, 1]]);
        let disc = discrepancies(&d).unwrap();
        assert!(disc.iter().all(|(_, x)| *x == Discrepancy::AtMostMinusOne));
        assert!(!is_log_terminal(&d).unwrap());
        let d = DefiningData::two(&[&[3], &[3], &[3]], 0, &[&[-1, 1, 1]]);
        assert!(!is_log_terminal(&d).unwrap());
        let r = singularity_type(&d).unwrap();
        assert_eq!((r.canonical, r.terminal), (Verdict::No, Verdict::No));
    }

    #[test]
    fn e6_roofs() {
        let roofs = leaf_roofs(&e6()).unwrap();
        assert_eq!(roofs.len(), 4);
        let lin = roofs.iter().find(|l| l.leaf == Leaf::Lineality).unwrap();
        assert_eq!(lin.vertices(), &[vec![Rat::zero(), Rat::zero(), Rat::one()]]);
        assert!(roofs.iter().filter(|l| l.leaf != Leaf::Lineality).all(|l| l.roof.dim == 1));
    }

    #[test]
    fn matrix_eight_verdicts() {
        let r = singularity_type(&m8(1)).unwrap();
        assert_eq!(r.log_terminal, Verdict::Yes);
        assert_eq!(r.canonical, Verdict::Yes);
        assert_eq!(r.terminal, Verdict::No);
        assert_eq!(r.cdv, Verdict::Yes);
        let roofs = leaf_roofs(&m8(1)).unwrap();
        let lin = roofs.iter().find(|l| l.leaf == Leaf::Lineality).unwrap();
        let mut v = lin.vertices().to_vec();
        v.sort();
        assert_eq!(v, vec![crate::linalg::rats(&ints(&[0, 0, 0, 1])), crate::linalg::rats(&ints(&[0, 0, 1, 1]))]);
    }

    #[test]
    fn cdv_witnesses() {
        assert_eq!(is_cdv(&m8(1)).unwrap(), (true, vec![]));
        let (ok, w) = is_cdv(&m8(2)).unwrap();
        assert!(!ok);
        assert!(w.contains(&ints(&[0, 0, 1, 1])));
        let n5 = DefiningData::two(&[&[4, 1], &[3], &[2]], 0, &[&[1, 4, 0, 0], &[-3, 0, 1, 1]]);
        let (ok, w) = is_cdv(&n5).unwrap();
        assert!(!ok);
        assert!(w.contains(&ints(&[-1, -1, 3, 0])));
        assert!(is_cdv(&m4(3)).unwrap().0);
    }

    #[test]
    fn smooth_chart_is_terminal() {
        let d = DefiningData::two(&[&[1, 1], &[1]], 0, &[&[0, 1, 0], &[1, 0, 0]]);
        let r = singularity_type(&d).unwrap();
        assert_eq!(r.terminal, Verdict::Yes);
        assert_eq!(r.canonical, Verdict::Yes);
    }

    #[test]
    fn e6_is_canonical_not_terminal() {
        let r = singularity_type(&e6()).unwrap();
        assert_eq!((r.canonical, r.terminal), (Verdict::Yes, Verdict::No));
        assert!(r.terminal_witnesses.contains(&ints(&[0, 0, 1])));
        assert!(r.canonical_witnesses.is_empty());
    }

    #[test]
    fn exports() {
        let j: Value = serde_json::from_str(&export_complex(&e6(), ExportFormat::Json).unwrap()).unwrap();
        assert_eq!(j["vertices"].as_array().unwrap().len(), 4);
        assert_eq!(j["faces"].as_array().unwrap().len(), 3);
        let off = export_complex(&e6(), ExportFormat::Off).unwrap();
        assert!(off.starts_with("OFF\n4 4 0\n"));
        let j: Value = serde_json::from_str(&export_complex(&m4(3), ExportFormat::Json).unwrap()).unwrap();
        assert_eq!(j["faces"].as_array().unwrap().len(), 3);
        assert_eq!(j["lineality"].as_array().unwrap().len(), 2);
        let off = export_complex(&m4(3), ExportFormat::Off).unwrap();
        assert!(off.starts_with("nOFF\n4\n"));
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&rat_frac(1, 3)), "0.333333333333");
        assert_eq!(decimal(&Rat::from_integer(Int::from(-5))), "-5");
    }

    #[test]
    fn high_dimension_is_unsupported() {
        let d = DefiningData::two(&[&[3], &[3], &[2]], 2, &[&[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1], &[-2, 1, 1, 1, 1]]);
        assert!(matches!(leaf_roofs(&d), Err(Error::Unsupported(_))));
        assert_eq!(singularity_type(&d).unwrap().log_terminal, Verdict::Yes);
    }

    fn random_data() -> impl Strategy<Value = Option<DefiningData>> {
        (
            prop::collection::vec(prop::collection::vec(1i64..6, 1..3), 3..4),
            prop::collection::vec(-3i64..4, 12),
        )
            .prop_map(|(blocks, entries)| {
                let n: usize = blocks.iter().map(Vec::len).sum();
                let refs: Vec<&[i64]> = blocks.iter().map(Vec::as_slice).collect();
                let row: Vec<i64> = entries[..n].to_vec();
                DefiningData::try_two(&refs, 0, &[&row]).ok()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn positive_ell_iff_platonic(d in random_data()) {
            let Some(d) = d else { return Ok(()) };
            let all_positive = elementary_cones(&d).unwrap().iter().all(|e| e.ell.is_positive());
            prop_assert_eq!(all_positive, platonic(&d));
        }

        #[test]
        fn rays_are_extremal_rays_of_lineality_slice(d in random_data()) {
            let Some(d) = d else { return Ok(()) };
            if !d.affine_profile().unwrap().pointed { return Ok(()) }
            let sigma = cone_hull(&d.columns()).unwrap();
            let dim = d.r() + d.s();
            let eqs: Vec<Vec<Int>> = (0..d.r()).map(|i| (0..dim).map(|k| Int::from((k == i) as i64)).collect()).collect();
            let slice = cone_from_inequalities(dim, &sigma.facets, &eqs).unwrap();
            let mut expect: Vec<Vec<Int>> = slice.rays.clone();
            expect.sort();
            let mut got: Vec<Vec<Int>> = elementary_cones(&d).unwrap().iter().map(|e| e.v.iter().map(|x| x / &e.c).collect()).collect();
            got.sort();
            got.dedup();
            prop_assert_eq!(got, expect);
        }

        #[test]
        fn verdicts_are_nested(d in random_data()) {
            let Some(d) = d else { return Ok(()) };
            if !d.affine_profile().unwrap().pointed { return Ok(()) }
            let r = singularity_type(&d).unwrap();
            if r.terminal.is_yes() { prop_assert!(r.canonical.is_yes()); }
            if r.canonical.is_yes() { prop_assert!(r.log_terminal.is_yes()); }
        }

        #[test]
        fn cdv_witnesses_persist(t in 2i64..6, extra in 0i64..3) {
            // enlarging the lineality coordinate of the free column keeps witnesses
            let base = m8(t);
            let bigger = m8(t + extra);
            let (a, _) = is_cdv(&base).unwrap();
            let (b, _) = is_cdv(&bigger).unwrap();
            prop_assert!(!a);
            prop_assert!(!b);
        }
    }
}
