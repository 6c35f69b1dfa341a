//! Exact convex geometry for the small cones and polytopes that occur here.
//!
//! Cones are converted between generator and inequality descriptions with
//! the double description method over big integers. Polytopes are handled by
//! homogenization. Lattice points are enumerated inside the affine lattice
//! spanned by a polytope, so lower-dimensional polytopes in a big ambient
//! space cost nothing extra.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    clear_denominators, dot, dot_mixed, primitive, rats, solve_integer, solve_rational_rows, to_rat, Int,
    IntMatrix, Rat,
};

/// Which part of a set a membership or enumeration query refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Closed,
    /// Relative interior; for full-dimensional sets this is the interior.
    Interior,
}

/// Generators of `{x : a.x >= 0 for a in ineqs, e.x = 0 for e in eqs}`.
#[derive(Clone, Debug, Default)]
pub struct Generators {
    pub lines: Vec<Vec<Int>>,
    pub rays: Vec<Vec<Int>>,
}

/// Double description: inequality form to generators.
pub fn h_to_v(dim: usize, ineqs: &[Vec<Int>], eqs: &[Vec<Int>]) -> Result<Generators> {
    if ineqs.iter().chain(eqs).any(|a| a.len() != dim) {
        return Err(Error::Dimension("constraint length differs from ambient dimension".into()));
    }
    let mut lines: Vec<Vec<Int>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    let mut rays: Vec<Vec<Int>> = Vec::new();
    // tight[k][c]: constraint c (in processing order) is tight at ray k
    let mut tight: Vec<Vec<bool>> = Vec::new();
    let mut constraints: Vec<Vec<Int>> = Vec::new();
    for e in eqs {
        constraints.push(e.clone());
        constraints.push(e.iter().map(|x| -x).collect());
    }
    constraints.extend(ineqs.iter().cloned());

    for (ci, a) in constraints.iter().enumerate() {
        if let Some(pos) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lines.swap_remove(pos);
            let mut s0 = dot(a, &l0);
            if s0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                s0 = -s0;
            }
            for l in lines.iter_mut() {
                let s = dot(a, l);
                if !s.is_zero() {
                    *l = primitive(&l.iter().zip(&l0).map(|(x, y)| &s0 * x - &s * y).collect::<Vec<_>>());
                }
            }
            for (r, t) in rays.iter_mut().zip(tight.iter_mut()) {
                let s = dot(a, r);
                if !s.is_zero() {
                    *r = primitive(&r.iter().zip(&l0).map(|(x, y)| &s0 * x - &s * y).collect::<Vec<_>>());
                }
                t.push(true);
            }
            let mut t0 = vec![true; ci];
            t0.push(false);
            rays.push(primitive(&l0));
            tight.push(t0);
            continue;
        }
        let vals: Vec<Int> = rays.iter().map(|r| dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, t) in tight.iter_mut().enumerate() {
                t.push(vals[k].is_zero());
            }
            continue;
        }
        let mut new_rays = Vec::new();
        let mut new_tight = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<bool> = tight[p].iter().zip(&tight[n]).map(|(x, y)| *x && *y).collect();
                let adjacent = (0..rays.len()).all(|k| {
                    k == p || k == n || !common.iter().zip(&tight[k]).all(|(c, t)| !*c || *t)
                });
                if !adjacent {
                    continue;
                }
                let v: Vec<Int> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(xn, xp)| &vals[p] * xn - &vals[n] * xp)
                    .collect();
                let mut t = common;
                t.push(true);
                new_rays.push(primitive(&v));
                new_tight.push(t);
            }
        }
        let mut kept_rays = Vec::new();
        let mut kept_tight = Vec::new();
        for k in 0..rays.len() {
            if !vals[k].is_negative() {
                let mut t = tight[k].clone();
                t.push(vals[k].is_zero());
                kept_rays.push(rays[k].clone());
                kept_tight.push(t);
            }
        }
        kept_rays.extend(new_rays);
        kept_tight.extend(new_tight);
        rays = kept_rays;
        tight = kept_tight;
    }
    let mut out_rays: Vec<Vec<Int>> = Vec::new();
    for r in rays {
        if !r.iter().all(Zero::is_zero) && !out_rays.contains(&r) {
            out_rays.push(r);
        }
    }
    Ok(Generators { lines, rays: out_rays })
}

/// A polyhedral cone carrying both descriptions.
#[derive(Clone, Debug)]
pub struct Cone {
    pub dim: usize,
    pub generators: Vec<Vec<Int>>,
    /// Inward facet normals: `f.x >= 0` on the cone.
    pub facets: Vec<Vec<Int>>,
    /// Linear equations of the linear hull.
    pub equations: Vec<Vec<Int>>,
    /// Primitive extremal rays (modulo the lineality space).
    pub rays: Vec<Vec<Int>>,
    /// Basis of the lineality space.
    pub lines: Vec<Vec<Int>>,
}

impl Cone {
    pub fn is_pointed(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn contains(&self, x: &[Rat], mode: Mode) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::Dimension(format!("point of length {} in a cone of dimension {}", x.len(), self.dim)));
        }
        if self.equations.iter().any(|e| !dot_mixed(x, e).is_zero()) {
            return Ok(false);
        }
        Ok(self.facets.iter().all(|f| {
            let v = dot_mixed(x, f);
            match mode {
                Mode::Closed => !v.is_negative(),
                Mode::Interior => v.is_positive(),
            }
        }))
    }

    pub fn contains_int(&self, x: &[Int], mode: Mode) -> Result<bool> {
        self.contains(&rats(x), mode)
    }

    /// True iff the primitive generator of `v` is an extremal ray.
    pub fn is_extremal(&self, v: &[Int]) -> bool {
        let p = primitive(v);
        self.rays.contains(&p)
    }
}

/// Cone generated by integer vectors.
pub fn cone_hull(gens: &[Vec<Int>]) -> Result<Cone> {
    let Some(first) = gens.first() else {
        return Err(Error::Dimension("cone over an empty generator list".into()));
    };
    let dim = first.len();
    if gens.iter().any(|g| g.len() != dim) {
        return Err(Error::Dimension("generators of different lengths".into()));
    }
    let gens: Vec<Vec<Int>> = gens.iter().filter(|g| !g.iter().all(Zero::is_zero)).cloned().collect();
    let dual = h_to_v(dim, &gens, &[])?;
    let facets = dual.rays;
    let equations = dual.lines;
    let primal = h_to_v(dim, &facets, &equations)?;
    Ok(Cone { dim, generators: gens, facets, equations, rays: primal.rays, lines: primal.lines })
}

pub fn cone_hull_rat(gens: &[Vec<Rat>]) -> Result<Cone> {
    let g: Vec<Vec<Int>> = gens.iter().map(|v| clear_denominators(v)).collect();
    cone_hull(&g)
}

/// Cone given by inequalities `a.x >= 0` and equations `e.x = 0`.
pub fn cone_from_inequalities(dim: usize, ineqs: &[Vec<Int>], eqs: &[Vec<Int>]) -> Result<Cone> {
    let g = h_to_v(dim, ineqs, eqs)?;
    let mut gens = g.rays.clone();
    gens.extend(g.lines.iter().cloned());
    gens.extend(g.lines.iter().map(|l| l.iter().map(|x| -x).collect()));
    if gens.is_empty() {
        return Ok(Cone {
            dim,
            generators: vec![],
            facets: vec![],
            equations: (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
                .collect(),
            rays: vec![],
            lines: vec![],
        });
    }
    cone_hull(&gens)
}

/// A rational polytope with its vertex and facet descriptions.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub ambient: usize,
    /// Extreme points only.
    pub vertices: Vec<Vec<Rat>>,
    pub base: Vec<Rat>,
    /// Basis of the direction space of the affine hull.
    pub directions: Vec<Vec<Rat>>,
    pub dim: usize,
    /// `(a, b)` meaning `a.x + b >= 0`.
    pub facets: Vec<(Vec<Int>, Int)>,
    /// `(a, b)` meaning `a.x + b = 0`.
    pub equations: Vec<(Vec<Int>, Int)>,
}

fn homogenize(p: &[Rat]) -> Vec<Int> {
    let mut v = p.to_vec();
    v.push(Rat::one());
    clear_denominators(&v)
}

fn split_affine(a: &[Int]) -> (Vec<Int>, Int) {
    let n = a.len() - 1;
    (a[..n].to_vec(), a[n].clone())
}

/// Convex hull of finitely many rational points.
pub fn polytope(points: &[Vec<Rat>]) -> Result<Polytope> {
    let Some(first) = points.first() else {
        return Err(Error::Dimension("polytope of no points".into()));
    };
    let ambient = first.len();
    if points.iter().any(|p| p.len() != ambient) {
        return Err(Error::Dimension("points of different lengths".into()));
    }
    let cone = cone_hull(&points.iter().map(|p| homogenize(p)).collect::<Vec<_>>())?;
    let vertices: Vec<Vec<Rat>> = cone
        .rays
        .iter()
        .map(|r| {
            let h = to_rat(&r[ambient]);
            r[..ambient].iter().map(|x| to_rat(x) / &h).collect()
        })
        .collect();
    let base = vertices[0].clone();
    let diffs: Vec<Vec<Rat>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&base).map(|(x, y)| x - y).collect())
        .collect();
    let mut ech = diffs.clone();
    let piv = crate::linalg::rref(&mut ech);
    let directions: Vec<Vec<Rat>> = ech.into_iter().take(piv.len()).collect();
    let dim = directions.len();
    Ok(Polytope {
        ambient,
        vertices,
        base,
        directions,
        dim,
        facets: cone.facets.iter().map(|f| split_affine(f)).collect(),
        equations: cone.equations.iter().map(|e| split_affine(e)).collect(),
    })
}

impl Polytope {
    pub fn contains(&self, x: &[Rat], mode: Mode) -> bool {
        if self.equations.iter().any(|(a, b)| !(dot_mixed(x, a) + to_rat(b)).is_zero()) {
            return false;
        }
        self.facets.iter().all(|(a, b)| {
            let v = dot_mixed(x, a) + to_rat(b);
            match mode {
                Mode::Closed => !v.is_negative(),
                Mode::Interior => v.is_positive(),
            }
        })
    }

    /// Membership of an integral point, in integer arithmetic.
    pub fn contains_int(&self, x: &[Int], mode: Mode) -> bool {
        if self.equations.iter().any(|(a, b)| !(dot(x, a) + b).is_zero()) {
            return false;
        }
        self.facets.iter().all(|(a, b)| {
            let v = dot(x, a) + b;
            match mode {
                Mode::Closed => !v.is_negative(),
                Mode::Interior => v.is_positive(),
            }
        })
    }

    /// For each facet, the indices of the vertices lying on it.
    pub fn facet_vertices(&self) -> Vec<Vec<usize>> {
        self.facets
            .iter()
            .map(|(a, b)| {
                (0..self.vertices.len())
                    .filter(|&k| (dot_mixed(&self.vertices[k], a) + to_rat(b)).is_zero())
                    .collect()
            })
            .collect()
    }

    /// Vertex indices in cyclic order for polygons, natural order otherwise.
    pub fn boundary_cycle(&self) -> Vec<usize> {
        let n = self.vertices.len();
        if self.dim != 2 {
            return (0..n).collect();
        }
        let edges: Vec<Vec<usize>> = self.facet_vertices().into_iter().filter(|e| e.len() == 2).collect();
        let mut cycle = vec![0usize];
        let mut prev = usize::MAX;
        while cycle.len() < n {
            let cur = *cycle.last().unwrap();
            let next = edges.iter().find_map(|e| {
                let other = if e[0] == cur { e[1] } else if e[1] == cur { e[0] } else { return None };
                (other != prev && !cycle.contains(&other)).then_some(other)
            });
            match next {
                Some(x) => {
                    prev = cur;
                    cycle.push(x);
                }
                None => break,
            }
        }
        cycle
    }
}

/// Lattice points of a polytope of dimension at most three.
pub fn lattice_points(p: &Polytope, mode: Mode) -> Result<Vec<Vec<Int>>> {
    if p.dim > 3 {
        return Err(Error::Unsupported(format!("lattice points of a {}-dimensional polytope", p.dim)));
    }
    let n = p.ambient;
    // integer points of the affine hull: x0 + K z
    let (x0, kernel) = if p.equations.is_empty() {
        (vec![Int::zero(); n], (0..n).map(|i| unit(n, i)).collect::<Vec<_>>())
    } else {
        let a = IntMatrix::from_rows(p.equations.iter().map(|(a, _)| a.clone()).collect())?;
        let b: Vec<Int> = p.equations.iter().map(|(_, b)| -b).collect();
        match solve_integer(&a, &b)? {
            Some(s) => s,
            None => return Ok(vec![]),
        }
    };
    let k = kernel.len();
    if k != p.dim {
        return Err(Error::internal("affine lattice rank differs from polytope dimension"));
    }
    let kcols: Vec<Vec<Rat>> = (0..n).map(|i| kernel.iter().map(|c| to_rat(&c[i])).collect()).collect();
    let mut lo: Vec<Option<Int>> = vec![None; k];
    let mut hi: Vec<Option<Int>> = vec![None; k];
    for v in &p.vertices {
        let rhs: Vec<Rat> = v.iter().zip(&x0).map(|(x, y)| x - to_rat(y)).collect();
        let z = solve_rational_rows(&kcols, k, &rhs)?
            .ok_or_else(|| Error::internal("vertex outside its affine hull"))?;
        for i in 0..k {
            let f = z[i].floor().to_integer();
            let c = z[i].ceil().to_integer();
            if lo[i].as_ref().is_none_or(|l| &f < l) {
                lo[i] = Some(f);
            }
            if hi[i].as_ref().is_none_or(|h| &c > h) {
                hi[i] = Some(c);
            }
        }
    }
    let lo: Vec<Int> = lo.into_iter().map(|x| x.unwrap_or_default()).collect();
    let hi: Vec<Int> = hi.into_iter().map(|x| x.unwrap_or_default()).collect();
    let mut out = Vec::new();
    let mut z = lo.clone();
    loop {
        let mut x = x0.clone();
        for (zi, col) in z.iter().zip(&kernel) {
            for (xj, cj) in x.iter_mut().zip(col) {
                *xj += zi * cj;
            }
        }
        if p.contains_int(&x, mode) {
            out.push(x);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == k {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            if z[i] < hi[i] {
                z[i] += 1;
                break;
            }
            z[i] = lo[i].clone();
            i += 1;
        }
    }
}

fn unit(n: usize, i: usize) -> Vec<Int> {
    (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()
}

/// Twice the area of a lattice polygon in the plane, by the shoelace formula.
pub fn twice_area(poly: &Polytope) -> Rat {
    let cyc = poly.boundary_cycle();
    let mut s = Rat::zero();
    for w in 0..cyc.len() {
        let a = &poly.vertices[cyc[w]];
        let b = &poly.vertices[cyc[(w + 1) % cyc.len()]];
        s += &a[0] * &b[1] - &a[1] * &b[0];
    }
    s.abs()
}

/// gcd-normalized integer direction of a rational vector, keeping sign.
pub fn integral_direction(v: &[Rat]) -> Vec<Int> {
    clear_denominators(v)
}

pub fn gcd_of(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ints, rat, rat_frac};
    use proptest::prelude::*;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn quadrant() {
        let c = cone_hull(&[ints(&[1, 0]), ints(&[0, 1])]).unwrap();
        assert!(c.is_pointed());
        let mut f = c.facets.clone();
        f.sort();
        assert_eq!(f, vec![ints(&[0, 1]), ints(&[1, 0])]);
        assert_eq!(c.rays.len(), 2);
    }

    #[test]
    fn half_plane_is_not_pointed() {
        let c = cone_hull(&[ints(&[1, 0]), ints(&[-1, 0]), ints(&[0, 1])]).unwrap();
        assert!(!c.is_pointed());
    }

    #[test]
    fn class_group_surface_cone() {
        let c = cone_hull(&[ints(&[-4, -4, -3]), ints(&[4, 0, 1]), ints(&[0, 4, 1])]).unwrap();
        assert!(c.is_pointed());
        assert_eq!(c.rays.len(), 3);
    }

    #[test]
    fn membership() {
        let gens = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1]), ints(&[1, 1, 1])];
        let c = cone_hull(&gens).unwrap();
        assert!(!c.contains_int(&ints(&[0, 0, 0]), Mode::Interior).unwrap());
        assert!(c.contains_int(&ints(&[1, 1, 1]), Mode::Interior).unwrap());
        assert!(c.contains_int(&ints(&[1, 0, 0]), Mode::Closed).unwrap());
        assert!(!c.contains_int(&ints(&[1, 0, 0]), Mode::Interior).unwrap());
        assert!(c.contains_int(&ints(&[1, 0]), Mode::Closed).is_err());
    }

    #[test]
    fn witness_of_matrix_eight_variant() {
        let cols = vec![ints(&[-5, -5, 0, -4]), ints(&[3, 0, 0, 1]), ints(&[0, 2, 0, 1]), ints(&[0, 0, 2, 1])];
        let c = cone_hull(&cols).unwrap();
        assert!(c.contains_int(&ints(&[0, 0, 1, 1]), Mode::Interior).unwrap());
    }

    #[test]
    fn segment_points() {
        let p = polytope(&pts(&[&[0, 0, 0, 1], &[0, 0, 3, 1]])).unwrap();
        assert_eq!(p.dim, 1);
        assert_eq!(lattice_points(&p, Mode::Interior).unwrap(), vec![ints(&[0, 0, 1, 1]), ints(&[0, 0, 2, 1])]);
        let q = polytope(&[vec![rat(0), rat(0), rat(0), rat(1)], vec![rat(0), rat(0), rat_frac(6, 5), rat(1)]]).unwrap();
        assert_eq!(lattice_points(&q, Mode::Interior).unwrap(), vec![ints(&[0, 0, 1, 1])]);
    }

    #[test]
    fn triangle_points() {
        let p = polytope(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1]])).unwrap();
        assert_eq!(p.vertices.len(), 3);
        assert_eq!(lattice_points(&p, Mode::Closed).unwrap().len(), 6);
        assert!(lattice_points(&p, Mode::Interior).unwrap().is_empty());
    }

    #[test]
    fn point_is_its_own_interior() {
        let p = polytope(&pts(&[&[0, 0, 1]])).unwrap();
        assert_eq!(p.dim, 0);
        assert_eq!(lattice_points(&p, Mode::Interior).unwrap(), vec![ints(&[0, 0, 1])]);
        let q = polytope(&[vec![rat_frac(1, 2), rat(0)]]).unwrap();
        assert!(lattice_points(&q, Mode::Closed).unwrap().is_empty());
    }

    #[test]
    fn tilted_plane_lattice() {
        // triangle in the plane x + y + z = 2 scaled so its lattice is non-standard
        let p = polytope(&pts(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]])).unwrap();
        assert_eq!(p.dim, 2);
        assert_eq!(lattice_points(&p, Mode::Closed).unwrap().len(), 6);
        let q = polytope(&pts(&[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 0, 1]])).unwrap();
        assert_eq!(q.boundary_cycle().len(), 3);
    }

    #[test]
    fn four_dimensional_polytope_is_rejected() {
        let p = polytope(&pts(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])).unwrap();
        assert!(lattice_points(&p, Mode::Closed).is_err());
    }

    fn brute_polygon_points(p: &Polytope, bound: i64) -> usize {
        let mut c = 0;
        for x in -bound..=bound {
            for y in -bound..=bound {
                if p.contains(&[rat(x), rat(y)], Mode::Closed) {
                    c += 1;
                }
            }
        }
        c
    }

    proptest! {
        #[test]
        fn round_trip_rays(gens in proptest::collection::vec(proptest::collection::vec(-4i64..5, 3), 1..7)) {
            let gens: Vec<Vec<Int>> = gens.iter().map(|g| ints(g)).filter(|g| !g.iter().all(Zero::is_zero)).collect();
            prop_assume!(!gens.is_empty());
            let c = cone_hull(&gens).unwrap();
            for g in &gens {
                prop_assert!(c.contains_int(g, Mode::Closed).unwrap());
            }
            if c.is_pointed() {
                let back = cone_hull(&c.rays).unwrap();
                let mut a = c.rays.clone();
                let mut b = back.rays.clone();
                a.sort();
                b.sort();
                prop_assert_eq!(a, b);
                for r in &c.rays {
                    prop_assert!(gens.iter().any(|g| primitive(g) == *r));
                }
            }
        }

        #[test]
        fn pick_theorem(v in proptest::collection::vec((-4i64..5, -4i64..5), 3..7)) {
            let points: Vec<Vec<Rat>> = v.iter().map(|&(x, y)| vec![rat(x), rat(y)]).collect();
            let p = polytope(&points).unwrap();
            prop_assume!(p.dim == 2);
            let total = lattice_points(&p, Mode::Closed).unwrap().len();
            let interior = lattice_points(&p, Mode::Interior).unwrap().len();
            let boundary = total - interior;
            prop_assert_eq!(total, brute_polygon_points(&p, 5));
            // 2A = 2I + B - 2
            prop_assert_eq!(twice_area(&p), rat(2 * interior as i64 + boundary as i64 - 2));
            let closed = lattice_points(&p, Mode::Closed).unwrap();
            for vtx in &p.vertices {
                if vtx.iter().all(|x| x.is_integer()) {
                    let iv: Vec<Int> = vtx.iter().map(|x| x.to_integer()).collect();
                    prop_assert!(closed.contains(&iv));
                }
            }
        }
    }
}
