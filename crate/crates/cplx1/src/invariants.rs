//! Arithmetic invariants of the exponent data of a ring `R(A, P0)`.

use num_integer::Integer;
use num_traits::{One, Signed};

use crate::data::{ExponentData, Variant};
use crate::error::{Error, Result};
use crate::linalg::{cokernel_structure, gcd_all, invariant_factors, lcm_all, Int, IntMatrix, Rat};

/// gcd data of the blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantProfile {
    /// gcd of each block
    pub block_gcds: Vec<Int>,
    /// gcd of all block gcds
    pub gcd: Int,
    /// `pair_gcds[i][j] = gcd(g_i / g, g_j / g)` with `g` the global gcd
    pub pair_gcds: Vec<Vec<Int>>,
    /// lcm of the block gcds
    pub lcm: Int,
    /// `lcm / g_i`
    pub cofactors: Vec<Int>,
    /// gcd of the cofactors of all other blocks
    pub complement_gcds: Vec<Int>,
}

fn require_two(e: &ExponentData) -> Result<()> {
    if e.variant != Variant::Two {
        return Err(Error::pre("operation needs variant 2 exponent data"));
    }
    Ok(())
}

pub fn profile(e: &ExponentData) -> Result<InvariantProfile> {
    require_two(e)?;
    Ok(profile_of_gcds(&e.block_gcds()))
}

/// The profile computed from the block gcds alone.
pub fn profile_of_gcds(g: &[Int]) -> InvariantProfile {
    let k = g.len();
    let gcd = gcd_all(g);
    let reduced: Vec<Int> = g.iter().map(|x| x / &gcd).collect();
    let pair_gcds = (0..k).map(|i| (0..k).map(|j| reduced[i].gcd(&reduced[j])).collect()).collect();
    let lcm = lcm_all(g);
    let cofactors: Vec<Int> = g.iter().map(|x| &lcm / x).collect();
    let complement_gcds = (0..k)
        .map(|i| gcd_all(cofactors.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c)))
        .collect();
    InvariantProfile { block_gcds: g.to_vec(), gcd, pair_gcds, lcm, cofactors, complement_gcds }
}

/// `sum 1/t_i > len(t) - 2`.
pub fn is_platonic_tuple(t: &[Int]) -> bool {
    if t.is_empty() {
        return false;
    }
    let sum: Rat = t.iter().map(|x| Rat::new(Int::one(), x.clone())).sum();
    sum > Rat::from_integer(Int::from(t.len() as i64 - 2))
}

/// Every cross-block choice of exponents is platonic.
///
/// Lowering an entry only raises the reciprocal sum, so the tuple of block
/// maxima is the worst choice.
pub fn is_platonic_ring(e: &ExponentData) -> Result<bool> {
    require_two(e)?;
    Ok(is_platonic_tuple(&e.block_maxima()))
}

pub fn is_factorial(e: &ExponentData) -> bool {
    let g = e.block_gcds();
    match e.variant {
        Variant::Two => pairwise_coprime(&g, &[]),
        Variant::One => g.iter().all(One::is_one),
    }
}

/// All pairs coprime, except pairs inside `skip`.
fn pairwise_coprime(g: &[Int], skip: &[usize]) -> bool {
    for u in 0..g.len() {
        for v in u + 1..g.len() {
            if skip.contains(&u) && skip.contains(&v) {
                continue;
            }
            if !g[u].gcd(&g[v]).is_one() {
                return false;
            }
        }
    }
    true
}

/// Genus of the curve attached to the ring, evaluated exactly.
pub fn genus(e: &ExponentData) -> Result<Int> {
    let p = profile(e)?;
    genus_of_profile(&p, e.r())
}

pub fn genus_of_profile(p: &InvariantProfile, r: usize) -> Result<Int> {
    let product: Int = p.block_gcds.iter().product();
    let sum: Rat = p.complement_gcds.iter().zip(&p.block_gcds).map(|(b, l)| Rat::new(b.clone(), l.clone())).sum();
    let bracket = Rat::from_integer(Int::from(r as i64 - 1)) - sum;
    let g = Rat::new(product, Int::from(2) * &p.lcm) * bracket + Rat::one();
    if !g.is_integer() || g.is_negative() {
        return Err(Error::internal(format!("genus evaluated to {g}")));
    }
    Ok(g.to_integer())
}

/// Rationality of the total coordinate space, read off the pairwise gcds.
pub fn is_total_space_rational(e: &ExponentData) -> Result<bool> {
    require_two(e)?;
    Ok(rational_gcds(&e.block_gcds()))
}

pub fn rational_gcds(g: &[Int]) -> bool {
    let k = g.len();
    if pairwise_coprime(g, &[]) {
        return true;
    }
    for i in 0..k {
        for j in i + 1..k {
            if !g[i].gcd(&g[j]).is_one() && pairwise_coprime(g, &[i, j]) {
                return true;
            }
            for l in j + 1..k {
                let two = Int::from(2);
                if g[i].gcd(&g[j]) == two
                    && g[i].gcd(&g[l]) == two
                    && g[j].gcd(&g[l]) == two
                    && pairwise_coprime(g, &[i, j, l])
                {
                    return true;
                }
            }
        }
    }
    false
}

/// Torsion of `Z^{n+m} / im(P0^T)`.
pub fn k0_torsion(e: &ExponentData) -> Result<Vec<Int>> {
    require_two(e)?;
    Ok(cokernel_structure(&e.p0().transpose()).torsion)
}

/// Closed form of the torsion for three blocks: cyclic groups of orders
/// `g` and `g * g01 * g02 * g12`, trivial factors dropped.
pub fn k0_torsion_closed_form(g: &[Int; 3]) -> Vec<Int> {
    let p = profile_of_gcds(g);
    let big = &p.gcd * &p.pair_gcds[0][1] * &p.pair_gcds[0][2] * &p.pair_gcds[1][2];
    [p.gcd, big].into_iter().filter(|x| !x.is_one()).collect()
}

/// Number of irreducible components of the zero set of a variable of the
/// given block: the product of the invariant factors of the matrix with rows
/// `(-g_a, 0, .., g_b, .., 0)` over the other blocks `a < b`.
pub fn component_count(e: &ExponentData, block: usize) -> Result<Int> {
    require_two(e)?;
    if block >= e.blocks.len() {
        return Err(Error::pre(format!("block index {block} out of range")));
    }
    let g = e.block_gcds();
    let others: Vec<&Int> = g.iter().enumerate().filter(|&(i, _)| i != block).map(|(_, x)| x).collect();
    Ok(component_count_of(&others))
}

pub fn component_count_of(others: &[&Int]) -> Int {
    if others.len() < 2 {
        return Int::one();
    }
    let rows = others.len() - 1;
    let mut m = IntMatrix::zeros(rows, others.len());
    for k in 0..rows {
        m[(k, 0)] = -others[0].clone();
        m[(k, k + 1)] = others[k + 1].clone();
    }
    invariant_factors(&m).iter().product()
}

/// The arithmetic identity `g (g g01 g02 g12 - (g01 + g02 + g12)) = -2`.
pub fn hypersurface_identity(g: &[Int; 3]) -> bool {
    let p = profile_of_gcds(g);
    let (a, b, c) = (&p.pair_gcds[0][1], &p.pair_gcds[0][2], &p.pair_gcds[1][2]);
    &p.gcd * (&p.gcd * a * b * c - (a + b + c)) == Int::from(-2)
}

/// The structural rationality condition for three blocks: after renumbering
/// `g0 = s c0, g1 = s c1, g2 = c2` with the `c` pairwise coprime and
/// `gcd(c2, s) = 1`, or all three are twice pairwise coprime numbers.
pub fn hypersurface_structure(g: &[Int; 3]) -> bool {
    for odd in 0..3 {
        let (x, y) = match odd {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let s = g[x].gcd(&g[y]);
        let c = [&g[x] / &s, &g[y] / &s, g[odd].clone()];
        if pairwise_coprime(&c, &[]) && c[2].gcd(&s).is_one() {
            return true;
        }
    }
    let two = Int::from(2);
    if g.iter().all(|x| x.is_even()) {
        let c: Vec<Int> = g.iter().map(|x| x / &two).collect();
        return pairwise_coprime(&c, &[]);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ints;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn e(blocks: &[&[i64]]) -> ExponentData {
        ExponentData::two(blocks, 0)
    }

    fn triple(a: i64, b: i64, c: i64) -> [Int; 3] {
        [Int::from(a), Int::from(b), Int::from(c)]
    }

    #[test]
    fn profiles() {
        let p = profile(&e(&[&[5], &[3], &[2]])).unwrap();
        assert_eq!(p.gcd, Int::one());
        assert_eq!(p.lcm, Int::from(30));
        assert_eq!(p.cofactors, ints(&[6, 10, 15]));
        assert_eq!(p.complement_gcds, ints(&[5, 3, 2]));
        let p = profile(&e(&[&[4], &[4], &[4]])).unwrap();
        assert_eq!(p.gcd, Int::from(4));
        assert!(p.pair_gcds.iter().flatten().all(One::is_one));
        assert_eq!(p.complement_gcds, ints(&[1, 1, 1]));
        assert_eq!(profile(&e(&[&[3, 1], &[3], &[2]])).unwrap().block_gcds, ints(&[1, 3, 2]));
        let one = ExponentData::new(Variant::One, vec![ints(&[2])], 0);
        assert!(profile(&one).is_err());
    }

    #[test]
    fn platonic() {
        assert!(is_platonic_tuple(&ints(&[4, 3, 2, 1, 1])));
        assert!(!is_platonic_tuple(&ints(&[3, 3, 3])));
        assert!(!is_platonic_tuple(&ints(&[2, 2, 2, 2])));
        assert!(is_platonic_ring(&ExponentData::two(&[&[5], &[3], &[2]], 1)).unwrap());
        assert!(!is_platonic_ring(&e(&[&[4], &[4], &[4]])).unwrap());
        for k in 1..20 {
            assert!(is_platonic_ring(&e(&[&[k], &[2, 1], &[2, 1]])).unwrap());
        }
    }

    #[test]
    fn factoriality() {
        assert!(is_factorial(&e(&[&[5], &[3], &[2]])));
        assert!(!is_factorial(&e(&[&[2], &[2], &[2]])));
        assert!(is_factorial(&e(&[&[3, 1], &[3], &[2]])));
        assert!(is_factorial(&ExponentData::new(Variant::One, vec![ints(&[3, 2]), ints(&[1])], 0)));
        assert!(!is_factorial(&ExponentData::new(Variant::One, vec![ints(&[2])], 0)));
    }

    #[test]
    fn genera() {
        assert_eq!(genus(&e(&[&[4], &[4], &[4]])).unwrap(), Int::from(3));
        assert_eq!(genus(&e(&[&[5], &[3], &[2]])).unwrap(), Int::zero());
        assert_eq!(genus(&e(&[&[6], &[6], &[6]])).unwrap(), Int::from(10));
    }

    #[test]
    fn plane_curve_oracle() {
        // Fermat curves of degree d have genus (d-1)(d-2)/2
        for d in 1..12 {
            let g = genus(&e(&[&[d], &[d], &[d]])).unwrap();
            assert_eq!(g, Int::from((d - 1) * (d - 2) / 2));
        }
    }

    #[test]
    fn rationality() {
        assert!(!is_total_space_rational(&e(&[&[4], &[4], &[4]])).unwrap());
        assert!(is_total_space_rational(&e(&[&[2], &[2], &[2]])).unwrap());
        assert!(is_total_space_rational(&e(&[&[5], &[3], &[2]])).unwrap());
    }

    #[test]
    fn torsion() {
        assert_eq!(k0_torsion(&e(&[&[4], &[4], &[4]])).unwrap(), ints(&[4, 4]));
        assert!(k0_torsion(&e(&[&[5], &[3], &[2]])).unwrap().is_empty());
        assert_eq!(k0_torsion(&e(&[&[6], &[10], &[15]])).unwrap(), ints(&[30]));
        assert_eq!(k0_torsion_closed_form(&triple(6, 10, 15)), ints(&[30]));
    }

    #[test]
    fn component_counts() {
        assert_eq!(component_count(&e(&[&[3], &[3], &[2]]), 2).unwrap(), Int::from(3));
        assert_eq!(component_count(&e(&[&[2], &[2], &[2]]), 0).unwrap(), Int::from(2));
        assert_eq!(component_count(&e(&[&[2], &[2], &[2], &[1, 1]]), 3).unwrap(), Int::from(4));
        assert!(component_count(&e(&[&[2], &[2], &[2]]), 3).is_err());
    }

    #[test]
    fn genus_zero_iff_rational_small_triples() {
        for a in 1..=8 {
            for b in 1..=8 {
                for c in 1..=8 {
                    let d = e(&[&[a], &[b], &[c]]);
                    assert_eq!(
                        genus(&d).unwrap().is_zero(),
                        is_total_space_rational(&d).unwrap(),
                        "triple ({a},{b},{c})"
                    );
                }
            }
        }
    }

    #[test]
    fn identity_iff_structure() {
        for a in 1..=12 {
            for b in 1..=12 {
                for c in 1..=12 {
                    let t = triple(a, b, c);
                    assert_eq!(hypersurface_identity(&t), hypersurface_structure(&t), "triple ({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn closed_form_torsion_small_triples() {
        for a in 1..=10 {
            for b in 1..=10 {
                for c in 1..=10 {
                    let d = e(&[&[a], &[b], &[c]]);
                    assert_eq!(k0_torsion(&d).unwrap(), k0_torsion_closed_form(&triple(a, b, c)), "({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn component_table_small_triples() {
        for a in 1..=8i64 {
            for b in 1..=8i64 {
                for c in 1..=8i64 {
                    let d = e(&[&[a], &[b], &[c]]);
                    assert_eq!(component_count(&d, 0).unwrap(), Int::from(b.gcd(&c)));
                    assert_eq!(component_count(&d, 1).unwrap(), Int::from(a.gcd(&c)));
                    assert_eq!(component_count(&d, 2).unwrap(), Int::from(a.gcd(&b)));
                }
            }
        }
    }

    fn exponent_data() -> impl Strategy<Value = ExponentData> {
        (prop::collection::vec(prop::collection::vec(1i64..7, 1..3), 3..5), 0usize..2).prop_map(|(blocks, m)| {
            ExponentData::new(Variant::Two, blocks.iter().map(|b| ints(b)).collect(), m)
        })
    }

    proptest! {
        #[test]
        fn platonic_implies_genus_zero(d in exponent_data()) {
            if is_platonic_ring(&d).unwrap() {
                prop_assert!(genus(&d).unwrap().is_zero());
                prop_assert!(is_total_space_rational(&d).unwrap());
            }
        }

        #[test]
        fn genus_zero_iff_rational(d in exponent_data()) {
            prop_assert_eq!(genus(&d).unwrap().is_zero(), is_total_space_rational(&d).unwrap());
        }

        #[test]
        fn complement_gcds_divide_lcm(d in exponent_data()) {
            let p = profile(&d).unwrap();
            for (b, l) in p.complement_gcds.iter().zip(&p.block_gcds) {
                prop_assert!((&p.lcm % b).is_zero());
                prop_assert!((l % &p.gcd).is_zero());
            }
        }

        #[test]
        fn component_count_is_product_of_divisors(d in exponent_data(), i in 0usize..5) {
            let i = i % d.blocks.len();
            let c = component_count(&d, i).unwrap();
            prop_assert!(c.is_positive());
        }
    }
}
