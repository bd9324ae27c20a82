use super::maps::{enumerate_pointed_maps, mask_elements, PointedMap};
use super::SetsError;

/// Block sizes `(|I_b|)_{b ∈ B}` of a special hypercube.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypercubeSpec {
    blocks: Vec<usize>,
}

impl HypercubeSpec {
    pub fn new(blocks: Vec<usize>) -> Result<Self, SetsError> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(SetsError::BadHypercube(blocks));
        }
        Ok(HypercubeSpec { blocks })
    }

    /// `n` singleton blocks.
    pub fn singletons(n: usize) -> Self {
        HypercubeSpec { blocks: vec![1; n] }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn dimension(&self) -> usize {
        self.blocks.len()
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().sum()
    }
}

/// Every block composition with at least `min_blocks` blocks and total size
/// at most `max_total`. These are all the cubes the excision test inspects.
pub fn hypercube_specs(max_total: usize, min_blocks: usize) -> Vec<HypercubeSpec> {
    fn go(left: usize, cur: &mut Vec<usize>, min_blocks: usize, out: &mut Vec<HypercubeSpec>) {
        if cur.len() >= min_blocks.max(1) {
            out.push(HypercubeSpec { blocks: cur.clone() });
        }
        for b in 1..=left {
            cur.push(b);
            go(left - b, cur, min_blocks, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(max_total, &mut Vec::new(), min_blocks, &mut out);
    out
}

/// The commuting cube of projections `ψ` between unions of blocks. Vertices
/// are bitmasks over the blocks; block `b` occupies consecutive positions of
/// the full union.
#[derive(Clone, Debug)]
pub struct SpecialHypercube {
    spec: HypercubeSpec,
    offsets: Vec<usize>,
}

impl SpecialHypercube {
    pub fn spec(&self) -> &HypercubeSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    pub fn top(&self) -> u32 {
        (1u32 << self.dimension()) - 1
    }

    /// All vertices, top first, by decreasing height.
    pub fn vertices(&self) -> Vec<u32> {
        let mut v: Vec<u32> = (0..=self.top()).collect();
        v.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));
        v
    }

    pub fn vertex_size(&self, vertex: u32) -> usize {
        mask_elements(vertex).iter().map(|&b| self.spec.blocks[b - 1]).sum()
    }

    /// Positions (1-based, in the full union) of the elements at a vertex.
    fn positions(&self, vertex: u32) -> Vec<usize> {
        let mut out = Vec::new();
        for b in mask_elements(vertex) {
            let start = self.offsets[b - 1];
            out.extend(start + 1..=start + self.spec.blocks[b - 1]);
        }
        out
    }

    /// The projection from vertex `from` to a subset `to ⊆ from`.
    pub fn arrow(&self, from: u32, to: u32) -> PointedMap {
        assert_eq!(from & to, to, "arrows only go to sub-vertices");
        let src = self.positions(from);
        let dst = self.positions(to);
        let images = src.iter().map(|p| dst.iter().position(|q| q == p).map_or(0, |k| k + 1)).collect();
        PointedMap::new_unchecked(dst.len(), images)
    }

    /// Codimension-one arrows `(from, to)`; these generate the cube.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for b in 0..self.dimension() {
                if v & (1 << b) != 0 {
                    out.push((v, v & !(1 << b)));
                }
            }
        }
        out
    }

    /// Every square `(v, v∖b, v∖c, v∖{b,c})` as `(v, b, c)` with `b < c`.
    pub fn squares(&self) -> Vec<(u32, usize, usize)> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for b in 0..self.dimension() {
                for c in b + 1..self.dimension() {
                    if v & (1 << b) != 0 && v & (1 << c) != 0 {
                        out.push((v, b, c));
                    }
                }
            }
        }
        out
    }

    fn square_commutes(&self, v: u32, b: usize, c: usize) -> bool {
        let (vb, vc) = (v & !(1 << b), v & !(1 << c));
        let bottom = vb & vc;
        let left = self.arrow(vb, bottom).compose(&self.arrow(v, vb)).unwrap();
        let right = self.arrow(vc, bottom).compose(&self.arrow(v, vc)).unwrap();
        left == right && left == self.arrow(v, bottom)
    }

    /// Checks that every square is a pushout of pointed sets, by the universal
    /// property against all pointed sets of size `≤ max_test`.
    pub fn is_strongly_cocartesian(&self, max_test: usize) -> bool {
        self.squares().into_iter().all(|(v, b, c)| {
            let (vb, vc) = (v & !(1 << b), v & !(1 << c));
            let bottom = vb & vc;
            let (p1, p2) = (self.arrow(v, vb), self.arrow(v, vc));
            let (q1, q2) = (self.arrow(vb, bottom), self.arrow(vc, bottom));
            (0..=max_test).all(|t| is_pushout(&p1, &p2, &q1, &q2, t))
        })
    }
}

/// Universal property of a pushout square `p1, p2 : X → X1, X2` and
/// `q1, q2 : X1, X2 → X12`, tested against the pointed set of size `t`.
fn is_pushout(p1: &PointedMap, p2: &PointedMap, q1: &PointedMap, q2: &PointedMap, t: usize) -> bool {
    let budget = usize::MAX;
    let us = enumerate_pointed_maps(p1.target(), t, budget).unwrap();
    let vs = enumerate_pointed_maps(p2.target(), t, budget).unwrap();
    let ws = enumerate_pointed_maps(q1.target(), t, budget).unwrap();
    for u in &us {
        let up = u.compose(p1).unwrap();
        for v in &vs {
            if v.compose(p2).unwrap() != up {
                continue;
            }
            let count = ws.iter().filter(|w| w.compose(q1).unwrap() == *u && w.compose(q2).unwrap() == *v).count();
            if count != 1 {
                return false;
            }
        }
    }
    true
}

pub fn special_hypercube(spec: &HypercubeSpec) -> SpecialHypercube {
    let mut offsets = Vec::with_capacity(spec.dimension());
    let mut acc = 0;
    for &b in &spec.blocks {
        offsets.push(acc);
        acc += b;
    }
    let cube = SpecialHypercube { spec: spec.clone(), offsets };
    assert!(
        cube.squares().into_iter().all(|(v, b, c)| cube.square_commutes(v, b, c)),
        "special hypercube squares must commute"
    );
    cube
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_cube() {
        let cube = special_hypercube(&HypercubeSpec::new(vec![1]).unwrap());
        assert_eq!(cube.edges(), vec![(1, 0)]);
        let a = cube.arrow(1, 0);
        assert_eq!((a.source(), a.target(), a.images()), (1, 0, &[0][..]));
    }

    #[test]
    fn square_sizes() {
        let cube = special_hypercube(&HypercubeSpec::singletons(2));
        let sizes: Vec<usize> = cube.vertices().iter().map(|&v| cube.vertex_size(v)).collect();
        assert_eq!(sizes, vec![2, 1, 1, 0]);
        assert_eq!(cube.squares().len(), 1);
    }

    #[test]
    fn uneven_blocks() {
        let cube = special_hypercube(&HypercubeSpec::new(vec![2, 1]).unwrap());
        assert_eq!(cube.vertex_size(0b01), 2);
        assert_eq!(cube.arrow(0b11, 0b01).images(), &[1, 2, 0]);
        assert_eq!(cube.arrow(0b11, 0b10).images(), &[0, 0, 1]);
    }

    #[test]
    fn rejects_empty_blocks() {
        assert!(HypercubeSpec::new(vec![]).is_err());
        assert!(HypercubeSpec::new(vec![1, 0]).is_err());
    }

    #[test]
    fn spec_enumeration() {
        // compositions of 1..=3 with >= 2 parts: (1,1) (1,2) (2,1) (1,1,1)
        let specs = hypercube_specs(3, 2);
        assert_eq!(specs.len(), 4);
        assert!(specs.iter().all(|s| s.dimension() >= 2 && s.total() <= 3));
    }
}
