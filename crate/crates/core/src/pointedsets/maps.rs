use std::fmt;

use super::SetsError;

/// A map `{*} ⊔ [m] → {*} ⊔ [m']`, stored as the images of `1..=m`.
/// The basepoint is encoded as `0` and is always sent to the basepoint.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointedMap {
    target: usize,
    images: Vec<usize>,
}

impl PointedMap {
    pub fn new(target: usize, images: Vec<usize>) -> Result<Self, SetsError> {
        if let Some(&bad) = images.iter().find(|&&x| x > target) {
            return Err(SetsError::BadImage { image: bad, target });
        }
        Ok(PointedMap { target, images })
    }

    pub(crate) fn new_unchecked(target: usize, images: Vec<usize>) -> Self {
        debug_assert!(images.iter().all(|&x| x <= target));
        PointedMap { target, images }
    }

    pub fn identity(m: usize) -> Self {
        PointedMap { target: m, images: (1..=m).collect() }
    }

    pub fn source(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of the element `i` (1-based; `0` is the basepoint).
    pub fn apply(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.images[i - 1]
        }
    }

    pub fn is_identity(&self) -> bool {
        self.target == self.source() && self.images.iter().enumerate().all(|(k, &x)| x == k + 1)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PointedMap) -> Result<PointedMap, SetsError> {
        if inner.target != self.source() {
            return Err(SetsError::NotComposable { inner: inner.target, outer: self.source() });
        }
        Ok(PointedMap { target: self.target, images: inner.images.iter().map(|&x| self.apply(x)).collect() })
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &PointedMap) -> Result<PointedMap, SetsError> {
        outer.compose(self)
    }

    /// Image of a subset given as a bitmask over `1..=source`; `None` if
    /// some element of the subset is sent to the basepoint.
    pub fn image_mask(&self, mask: u32) -> Option<u32> {
        let mut out = 0u32;
        for i in 1..=self.source() {
            if mask & (1 << (i - 1)) != 0 {
                let y = self.images[i - 1];
                if y == 0 {
                    return None;
                }
                out |= 1 << (y - 1);
            }
        }
        Some(out)
    }

    /// The surjection `S ↠ ξ(S)` between order-preservingly renumbered
    /// subsets, when no element of `S` hits the basepoint.
    pub fn restrict_to(&self, mask: u32) -> Option<(u32, Surjection)> {
        let image = self.image_mask(mask)?;
        let targets = mask_elements(image);
        let images = mask_elements(mask)
            .iter()
            .map(|&i| {
                let y = self.images[i - 1];
                targets.iter().position(|&t| t == y).unwrap() + 1
            })
            .collect();
        Some((image, Surjection { target: targets.len(), images }))
    }

    pub fn to_surjection(&self) -> Option<Surjection> {
        Surjection::new(self.target, self.images.clone()).ok()
    }
}

impl fmt::Debug for PointedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}{:?}", self.source(), self.target, self.images)
    }
}

impl fmt::Display for PointedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A surjection `[m] ↠ [m']`. The size-0 object is allowed only through
/// the identity of the empty set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Surjection {
    target: usize,
    images: Vec<usize>,
}

impl Surjection {
    pub fn new(target: usize, images: Vec<usize>) -> Result<Self, SetsError> {
        let mut hit = vec![false; target];
        for &x in &images {
            if x == 0 || x > target {
                return Err(SetsError::BadImage { image: x, target });
            }
            hit[x - 1] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err(SetsError::NotSurjective(images));
        }
        Ok(Surjection { target, images })
    }

    pub fn identity(m: usize) -> Self {
        Surjection { target: m, images: (1..=m).collect() }
    }

    pub fn source(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &x)| x == k + 1) && self.target == self.source()
    }

    /// The pointed map `{*} ⊔ ξ`.
    pub fn as_pointed(&self) -> PointedMap {
        PointedMap { target: self.target, images: self.images.clone() }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Surjection) -> Result<Surjection, SetsError> {
        if inner.target != self.source() {
            return Err(SetsError::NotComposable { inner: inner.target, outer: self.source() });
        }
        Ok(Surjection { target: self.target, images: inner.images.iter().map(|&x| self.images[x - 1]).collect() })
    }
}

impl fmt::Debug for Surjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->>{}{:?}", self.source(), self.target, self.images)
    }
}

/// Elements (1-based) of a subset bitmask, in increasing order.
pub fn mask_elements(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

pub fn mask_of(elements: &[usize]) -> u32 {
    elements.iter().fold(0, |acc, &i| acc | (1 << (i - 1)))
}

/// All subsets of `[m]` ordered by cardinality, then lexicographically on
/// their sorted element lists. Every block matrix in the crate uses this order.
pub fn subsets_in_order(m: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (0..(1u32 << m)).collect();
    all.sort_by_key(|&s| (s.count_ones(), mask_elements(s)));
    all
}

fn subset_mask(m: usize, subset: &[usize]) -> Result<u32, SetsError> {
    let mut mask = 0u32;
    for &i in subset {
        if i == 0 || i > m || mask & (1 << (i - 1)) != 0 {
            return Err(SetsError::SubsetOutOfRange { element: i, size: m });
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

pub(crate) fn phi_mask(m: usize, mask: u32) -> PointedMap {
    PointedMap { target: m, images: mask_elements(mask) }
}

pub(crate) fn psi_mask(m: usize, mask: u32) -> PointedMap {
    let mut next = 0;
    let images = (1..=m)
        .map(|i| {
            if mask & (1 << (i - 1)) != 0 {
                next += 1;
                next
            } else {
                0
            }
        })
        .collect();
    PointedMap { target: mask.count_ones() as usize, images }
}

/// Inclusion `{*} ⊔ S → {*} ⊔ [m]`, with `S` renumbered as `[|S|]`.
pub fn phi_map(m: usize, subset: &[usize]) -> Result<PointedMap, SetsError> {
    Ok(phi_mask(m, subset_mask(m, subset)?))
}

/// Projection `{*} ⊔ [m] → {*} ⊔ S`: identity on `S`, basepoint elsewhere.
pub fn psi_map(m: usize, subset: &[usize]) -> Result<PointedMap, SetsError> {
    Ok(psi_mask(m, subset_mask(m, subset)?))
}

/// All `(m'+1)^m` pointed maps, lexicographic in the image list.
pub fn enumerate_pointed_maps(m: usize, target: usize, budget: usize) -> Result<Vec<PointedMap>, SetsError> {
    if m > budget || target > budget {
        return Err(SetsError::BudgetExceeded { size: m.max(target), budget });
    }
    let mut out = Vec::with_capacity((target + 1).pow(m as u32));
    let mut images = vec![0usize; m];
    loop {
        out.push(PointedMap { target, images: images.clone() });
        // odometer, last position fastest
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if images[k] < target {
                images[k] += 1;
                for x in images.iter_mut().skip(k + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// All surjections `[m] ↠ [m']`, lexicographic in the image list.
pub fn enumerate_surjections(m: usize, target: usize) -> Vec<Surjection> {
    if target == 0 || m < target {
        return if m == 0 && target == 0 { vec![Surjection::identity(0)] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut images = vec![1usize; m];
    loop {
        if let Ok(s) = Surjection::new(target, images.clone()) {
            out.push(s);
        }
        let mut k = m;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if images[k] < target {
                images[k] += 1;
                for x in images.iter_mut().skip(k + 1) {
                    *x = 1;
                }
                break;
            }
        }
    }
}

/// `[d+1] ↠ [d]`, `i ↦ min(i, d)`.
pub fn collapse_map(d: usize) -> Surjection {
    assert!(d >= 1, "collapse map needs d >= 1");
    Surjection { target: d, images: (1..=d + 1).map(|i| i.min(d)).collect() }
}

/// Smash product on the skeleton: `(i, j)` is linearized as `(i-1)·|J| + j`.
pub fn smash(f: &PointedMap, g: &PointedMap) -> PointedMap {
    let (m, k) = (f.source(), g.source());
    let k2 = g.target;
    let mut images = Vec::with_capacity(m * k);
    for i in 1..=m {
        for j in 1..=k {
            let (a, b) = (f.apply(i), g.apply(j));
            images.push(if a == 0 || b == 0 { 0 } else { (a - 1) * k2 + b });
        }
    }
    PointedMap { target: f.target * k2, images }
}

/// Wedge sum on the skeleton: the first summand comes first.
pub fn wedge(f: &PointedMap, g: &PointedMap) -> PointedMap {
    let shift = f.target;
    let images = f.images.iter().copied().chain(g.images.iter().map(|&b| if b == 0 { 0 } else { b + shift })).collect();
    PointedMap { target: f.target + g.target, images }
}

fn permutation(images: Vec<usize>) -> PointedMap {
    PointedMap { target: images.len(), images }
}

/// A generating set of the morphisms of `FinSet_{*,≤n}`: at each size the
/// transposition `(1 2)`, the cycle `(1 2 … m)`, killing the last element,
/// including `[m-1]` as the first elements, and merging the last two.
pub fn pointed_generators(n_max: usize) -> Vec<PointedMap> {
    let mut out = Vec::new();
    for m in 1..=n_max {
        if m >= 2 {
            let mut t: Vec<usize> = (1..=m).collect();
            t.swap(0, 1);
            out.push(permutation(t));
            out.push(collapse_map(m - 1).as_pointed());
        }
        if m >= 3 {
            out.push(permutation((1..=m).map(|i| i % m + 1).collect()));
        }
        out.push(psi_mask(m, (1 << (m - 1)) - 1));
        out.push(phi_mask(m, (1 << (m - 1)) - 1));
    }
    out
}

/// A generating set of `FinSetSurj_{n.e.,≤ℓ}`: transpositions, cycles and
/// the collapse maps `[m] ↠ [m-1]`.
pub fn surjection_generators(ell: usize) -> Vec<Surjection> {
    let mut out = Vec::new();
    for m in 2..=ell {
        let mut t: Vec<usize> = (1..=m).collect();
        t.swap(0, 1);
        out.push(Surjection { target: m, images: t });
        if m >= 3 {
            out.push(Surjection { target: m, images: (1..=m).map(|i| i % m + 1).collect() });
        }
        out.push(collapse_map(m - 1));
    }
    out
}
