//! The hyperplane arrangement on the framing torus of a quiver variety.
//!
//! A point `w` of the Lie algebra of the framing torus lies on the
//! hyperplane `H_{i,j}^{(n)}` when `w_i - w_j = n` for an integer `n`. The
//! hyperplanes through `w` cut the framing coordinates into blocks, and the
//! fixed locus of the subtorus they define is a product of smaller quiver
//! varieties indexed by splittings of the dimension vector.

use num_integer::binomial;
use rayon::prelude::*;
use serde::Serialize;

use crate::charalg::{Character, Var};
use crate::error::{Error, Result};
use crate::rat::{self, Q};

/// A point `(w_1, ..., w_r)` on the framing torus, one slope per framing
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramingPoint {
    w: Vec<Q>,
}

impl FramingPoint {
    pub fn new(w: Vec<Q>) -> Self {
        Self { w }
    }

    pub fn coordinates(&self) -> &[Q] {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }
}

/// An active hyperplane `w_i - w_j = n` with `i < j`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Hyperplane {
    pub i: usize,
    pub j: usize,
    pub n: i64,
}

/// Partition of the framing coordinates `1..=r` into classes of the
/// relation `w_i - w_j` integral.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockPartition {
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    /// Validates that `blocks` partition `1..=r`. Blocks are sorted
    /// internally and ordered by their least element.
    pub fn new(mut blocks: Vec<Vec<usize>>, r: usize) -> Result<Self> {
        let mut seen = vec![false; r];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i == 0 || i > r || std::mem::replace(&mut seen[i - 1], true) {
                    return Err(Error::InvalidArgument(format!("index {i} is out of range or repeated")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidArgument(format!("index {} is in no block", i + 1)));
        }
        blocks.sort();
        Ok(Self { blocks })
    }

    pub fn singletons(r: usize) -> Self {
        Self { blocks: (1..=r).map(|i| vec![i]).collect() }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block number of coordinate `i` (1-based).
    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&i))
    }

    /// Whether `self` is at least as coarse as `finer`: every block of
    /// `finer` sits inside a block of `self`.
    pub fn coarsens(&self, finer: &Self) -> bool {
        finer.blocks.iter().all(|b| {
            let k = self.block_of(b[0]);
            k.is_some() && b.iter().all(|&i| self.block_of(i) == k)
        })
    }
}

/// Vertex count, framing and dimension vectors of a quiver variety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverFrame {
    framing: Vec<u32>,
    dimension: Vec<u32>,
}

impl QuiverFrame {
    pub fn new(framing: Vec<u32>, dimension: Vec<u32>) -> Result<Self> {
        if framing.len() != dimension.len() {
            return Err(Error::InvalidArgument(format!(
                "framing has {} vertices, dimension vector has {}",
                framing.len(),
                dimension.len()
            )));
        }
        Ok(Self { framing, dimension })
    }

    pub fn vertex_count(&self) -> usize {
        self.framing.len()
    }

    pub fn framing(&self) -> &[u32] {
        &self.framing
    }

    pub fn dimension(&self) -> &[u32] {
        &self.dimension
    }

    /// `|r|`, the rank of the framing torus.
    pub fn framing_rank(&self) -> usize {
        self.framing.iter().map(|&r| r as usize).sum()
    }

    /// Vertex carrying framing coordinate `i` (1-based). Coordinates are
    /// numbered vertex by vertex.
    pub fn vertex_of(&self, i: usize) -> Option<usize> {
        let mut acc = 0;
        for (v, &r) in self.framing.iter().enumerate() {
            acc += r as usize;
            if i <= acc {
                return Some(v);
            }
        }
        None
    }

    /// Framing vector of each block: coordinates in block `k` counted per
    /// vertex.
    pub fn split_framing(&self, blocks: &BlockPartition) -> Result<Vec<Vec<u32>>> {
        self.check_blocks(blocks)?;
        Ok(blocks
            .blocks()
            .iter()
            .map(|b| {
                let mut r = vec![0u32; self.vertex_count()];
                for &i in b {
                    r[self.vertex_of(i).expect("checked")] += 1;
                }
                r
            })
            .collect())
    }

    fn check_blocks(&self, blocks: &BlockPartition) -> Result<()> {
        let covered: usize = blocks.blocks().iter().map(Vec::len).sum();
        if covered != self.framing_rank() {
            return Err(Error::InvalidArgument(format!(
                "blocks cover {covered} coordinates, framing rank is {}",
                self.framing_rank()
            )));
        }
        Ok(())
    }
}

/// Hyperplanes `w_i - w_j = n` through `p`, `i < j`.
pub fn active_hyperplanes(p: &FramingPoint) -> Vec<Hyperplane> {
    let w = p.coordinates();
    let mut out = Vec::new();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let d = w[i] - w[j];
            if d.is_integer() {
                out.push(Hyperplane { i: i + 1, j: j + 1, n: d.to_integer() });
            }
        }
    }
    out
}

/// Classes of the relation `w_i - w_j` integral.
pub fn index_blocks(p: &FramingPoint) -> BlockPartition {
    let mut blocks: Vec<(Q, Vec<usize>)> = Vec::new();
    for (i, &wi) in p.coordinates().iter().enumerate() {
        let frac = wi - rat::int(rat::floor(wi));
        match blocks.iter_mut().find(|(f, _)| *f == frac) {
            Some((_, b)) => b.push(i + 1),
            None => blocks.push((frac, vec![i + 1])),
        }
    }
    BlockPartition { blocks: blocks.into_iter().map(|(_, b)| b).collect() }
}

/// Order `b` of the cyclic subgroup generated by `a -> a e^{2 pi i w}`: the
/// least common multiple of the denominators of the `w_i`.
pub fn cyclic_order(p: &FramingPoint) -> u64 {
    rat::lcm_of_denominators(p.coordinates()) as u64
}

/// One fixed component: the dimension vector `n_k` carried by each block.
pub type ComponentLabel = Vec<Vec<u32>>;

/// All splittings `n = n_1 + ... + n_m` of the dimension vector over the
/// `m` blocks, componentwise per vertex. The first block varies slowest.
pub fn enumerate_fixed_components(frame: &QuiverFrame, blocks: &BlockPartition) -> Result<Vec<ComponentLabel>> {
    frame.check_blocks(blocks)?;
    let m = blocks.len();
    let per_vertex: Vec<Vec<Vec<u32>>> =
        frame.dimension().par_iter().map(|&n| weak_compositions(n, m)).collect();
    let mut out: Vec<ComponentLabel> = vec![vec![Vec::with_capacity(frame.vertex_count()); m]];
    for comps in &per_vertex {
        let mut next = Vec::with_capacity(out.len() * comps.len());
        for label in &out {
            for c in comps {
                let mut l = label.clone();
                for (k, &part) in c.iter().enumerate() {
                    l[k].push(part);
                }
                next.push(l);
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

/// Closed-form count `prod_v C(n_v + m - 1, m - 1)`.
pub fn component_count(frame: &QuiverFrame, blocks: &BlockPartition) -> u64 {
    let m = blocks.len() as u64;
    if m == 0 {
        return u64::from(frame.dimension().iter().all(|&n| n == 0));
    }
    frame.dimension().iter().map(|&n| binomial(n as u64 + m - 1, m - 1)).product()
}

fn weak_compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    match parts {
        0 if n == 0 => vec![Vec::new()],
        0 => Vec::new(),
        1 => vec![vec![n]],
        _ => (0..=n)
            .flat_map(|first| {
                weak_compositions(n - first, parts - 1).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect(),
    }
}

/// Whether `a_i / a_j` occurs in the normal bundle of the fixed locus,
/// which happens exactly when `i` and `j` lie in different blocks.
pub fn normal_character_predicate(i: usize, j: usize, blocks: &BlockPartition) -> Result<bool> {
    if i == j {
        return Err(Error::InvalidArgument("need two distinct coordinates".into()));
    }
    match (blocks.block_of(i), blocks.block_of(j)) {
        (Some(bi), Some(bj)) => Ok(bi != bj),
        _ => Err(Error::InvalidArgument(format!("coordinates {i}, {j} not in the partition"))),
    }
}

/// Splits `p_char` into the part fixed by the cyclic subgroup of `p` and the
/// moving rest.
pub fn invariant_polarization_split(p_char: &Character, p: &FramingPoint) -> Result<(Character, Character)> {
    let too_big = p_char
        .terms()
        .flat_map(|(m, _)| m.vars().collect::<Vec<_>>())
        .find(|v| matches!(v, Var::Equivariant(i) if *i as usize >= p.dim()));
    if let Some(v) = too_big {
        return Err(Error::InvalidArgument(format!("character uses {v:?} beyond the framing point")));
    }
    let inv = p_char.invariant_part(p.coordinates());
    let moving = p_char - &inv;
    Ok((inv, moving))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charalg::{Monomial, VariableSet};
    use crate::rat::{int, q};

    fn pt(w: &[Q]) -> FramingPoint {
        FramingPoint::new(w.to_vec())
    }

    #[test]
    fn hyperplanes() {
        assert_eq!(active_hyperplanes(&pt(&[int(0), int(1), q(1, 2)])), vec![Hyperplane { i: 1, j: 2, n: -1 }]);
        let zero = active_hyperplanes(&pt(&[int(0); 3]));
        assert_eq!(zero.len(), 3);
        assert!(zero.iter().all(|h| h.n == 0));
        assert!(active_hyperplanes(&pt(&[int(0), q(1, 2)])).is_empty());
    }

    #[test]
    fn blocks() {
        let b = index_blocks(&pt(&[int(0), int(1), q(1, 2)]));
        assert_eq!(b.blocks(), &[vec![1, 2], vec![3]]);
        assert_eq!(index_blocks(&pt(&[q(1, 3), q(1, 2), q(1, 5)])), BlockPartition::singletons(3));
        assert_eq!(index_blocks(&pt(&[int(0); 4])).len(), 1);
        assert_eq!(index_blocks(&pt(&[q(-1, 2), q(1, 2)])).len(), 1);
    }

    #[test]
    fn order() {
        assert_eq!(cyclic_order(&pt(&[int(0), q(1, 2)])), 2);
        assert_eq!(cyclic_order(&pt(&[q(1, 3), q(1, 6)])), 6);
        assert_eq!(cyclic_order(&pt(&[int(3), int(-1)])), 1);
    }

    #[test]
    fn components() {
        let frame = QuiverFrame::new(vec![2], vec![2]).unwrap();
        let got = enumerate_fixed_components(&frame, &BlockPartition::singletons(2)).unwrap();
        let want: Vec<ComponentLabel> = vec![vec![vec![0], vec![2]], vec![vec![1], vec![1]], vec![vec![2], vec![0]]];
        assert_eq!(got, want);

        let one = BlockPartition::new(vec![vec![1, 2]], 2).unwrap();
        assert_eq!(enumerate_fixed_components(&frame, &one).unwrap(), vec![vec![vec![2]]]);

        let two = QuiverFrame::new(vec![1, 1], vec![1, 1]).unwrap();
        let got = enumerate_fixed_components(&two, &BlockPartition::singletons(2)).unwrap();
        assert_eq!(got.len(), 4);
        assert_eq!(component_count(&two, &BlockPartition::singletons(2)), 4);
    }

    #[test]
    fn framing_split() {
        let frame = QuiverFrame::new(vec![2, 1], vec![1, 1]).unwrap();
        let b = BlockPartition::new(vec![vec![1, 3], vec![2]], 3).unwrap();
        assert_eq!(frame.split_framing(&b).unwrap(), vec![vec![1, 1], vec![1, 0]]);
        assert!(frame.split_framing(&BlockPartition::singletons(2)).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(BlockPartition::new(vec![vec![1], vec![1, 2]], 2).is_err());
        assert!(BlockPartition::new(vec![vec![1]], 2).is_err());
        assert!(BlockPartition::new(vec![vec![3]], 2).is_err());
        assert!(BlockPartition::new(vec![vec![]], 0).is_err());
    }

    #[test]
    fn normal_predicate() {
        let b = BlockPartition::new(vec![vec![1, 2], vec![3]], 3).unwrap();
        assert!(normal_character_predicate(1, 3, &b).unwrap());
        assert!(!normal_character_predicate(1, 2, &b).unwrap());
        assert!(normal_character_predicate(2, 1, &BlockPartition::singletons(2)).unwrap());
        assert!(normal_character_predicate(1, 1, &b).is_err());
    }

    #[test]
    fn polarization_split() {
        let vars = VariableSet::framing(2);
        let p = Character::parse("a1 * a2^-1 + a1^-1 * a2", &vars).unwrap();
        let (inv, mov) = invariant_polarization_split(&p, &pt(&[int(0), q(1, 2)])).unwrap();
        assert!(inv.is_zero());
        assert_eq!(mov, p);
        let (inv, mov) = invariant_polarization_split(&p, &pt(&[int(0), int(1)])).unwrap();
        assert_eq!(inv, p);
        assert!(mov.is_zero());
        let c = Character::constant(3);
        assert_eq!(invariant_polarization_split(&c, &pt(&[q(1, 3)])).unwrap().0, c);
        let wide = Character::monomial(Monomial::var(Var::Equivariant(2)));
        assert!(invariant_polarization_split(&wide, &pt(&[int(0), int(0)])).is_err());
    }

    #[test]
    fn block_relation_matches_invariance() {
        let grid = [int(0), q(1, 2), int(1), q(1, 3), q(-2, 3), q(3, 2)];
        for a in grid {
            for b in grid {
                for c in grid {
                    let p = pt(&[a, b, c]);
                    let blocks = index_blocks(&p);
                    for i in 1..=3 {
                        for j in 1..=3 {
                            if i == j {
                                continue;
                            }
                            let m = Monomial::from_ints([(Var::Equivariant(i as u16 - 1), 1), (Var::Equivariant(j as u16 - 1), -1)]);
                            let moving = !Character::monomial(m).invariant_part(p.coordinates()).is_zero();
                            assert_eq!(normal_character_predicate(i, j, &blocks).unwrap(), !moving);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn refinement_is_monotone() {
        let generic = index_blocks(&pt(&[q(1, 5), q(1, 3), q(1, 7)]));
        let one_wall = index_blocks(&pt(&[q(1, 5), q(6, 5), q(1, 7)]));
        let two_walls = index_blocks(&pt(&[q(1, 5), q(6, 5), q(-4, 5)]));
        assert!(one_wall.coarsens(&generic));
        assert!(two_walls.coarsens(&one_wall));
        assert!(!generic.coarsens(&one_wall));
    }
}
