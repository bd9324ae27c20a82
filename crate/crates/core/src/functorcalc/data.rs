use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::exactlin::{inverse, ExactMatrix, RingSpec};
use crate::pointedsets::{
    enumerate_pointed_maps, enumerate_surjections, pointed_generators, surjection_generators, PointedMap, Surjection,
};

use super::FunctorError;

/// How a functor produces the matrix of a pointed map. Rules are evaluated on
/// demand; [`FunctorData`] caches the results.
pub trait ActionRule: Send + Sync {
    /// The matrix of `G(map)`, of shape `rank(target) x rank(source)`.
    fn evaluate(&self, map: &PointedMap) -> ExactMatrix;

    fn name(&self) -> &'static str;
}

const CACHE_BUDGET: usize = 1 << 21;

#[derive(Default)]
struct ActionCache {
    matrices: HashMap<PointedMap, Arc<ExactMatrix>>,
    scalars: usize,
}

/// A functor `FinSet_{*,≤N} → free modules`: one rank per size `0..=N` and
/// a matrix for every pointed map.
#[derive(Clone)]
pub struct FunctorData {
    ring: RingSpec,
    max_size: usize,
    ranks: Vec<usize>,
    rule: Arc<dyn ActionRule>,
    cache: Arc<RwLock<ActionCache>>,
}

impl fmt::Debug for FunctorData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctorData")
            .field("ring", &self.ring)
            .field("max_size", &self.max_size)
            .field("ranks", &self.ranks)
            .field("rule", &self.rule.name())
            .finish()
    }
}

impl FunctorData {
    pub fn from_rule(ring: RingSpec, max_size: usize, ranks: Vec<usize>, rule: Arc<dyn ActionRule>) -> Self {
        assert_eq!(ranks.len(), max_size + 1, "one rank per size 0..=N");
        FunctorData { ring, max_size, ranks, rule, cache: Arc::default() }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, m: usize) -> usize {
        self.ranks[m]
    }

    pub fn rule_name(&self) -> &'static str {
        self.rule.name()
    }

    /// The matrix `G(map)`.
    pub fn action(&self, map: &PointedMap) -> Arc<ExactMatrix> {
        assert!(
            map.source() <= self.max_size && map.target() <= self.max_size,
            "map {map:?} leaves FinSet_(*,<={})",
            self.max_size
        );
        if let Some(m) = self.cache.read().unwrap().matrices.get(map) {
            return m.clone();
        }
        let m = Arc::new(self.rule.evaluate(map));
        let mut cache = self.cache.write().unwrap();
        let size = m.rows() * m.cols();
        if cache.scalars + size > CACHE_BUDGET {
            cache.matrices.clear();
            cache.scalars = 0;
        }
        cache.scalars += size;
        cache.matrices.insert(map.clone(), m.clone());
        m
    }

    /// The same functor restricted to sizes `≤ n`.
    pub fn truncate(&self, n: usize) -> FunctorData {
        assert!(n <= self.max_size);
        FunctorData {
            ring: self.ring,
            max_size: n,
            ranks: self.ranks[..=n].to_vec(),
            rule: self.rule.clone(),
            cache: self.cache.clone(),
        }
    }

    /// A copy whose matrix at one map is replaced. Used to build invalid
    /// data for negative tests.
    pub fn with_override(&self, map: PointedMap, matrix: ExactMatrix) -> FunctorData {
        let rule = OverrideRule { base: self.clone(), map, matrix };
        FunctorData::from_rule(self.ring, self.max_size, self.ranks.clone(), Arc::new(rule))
    }

    /// The functor transported along the isomorphisms `changes[m]` of each
    /// value: `ξ ↦ C_{m'} G(ξ) C_m^{-1}`.
    pub fn conjugate(&self, changes: Vec<ExactMatrix>) -> Result<FunctorData, FunctorError> {
        if changes.len() != self.max_size + 1 {
            return Err(FunctorError::SizeMismatch(changes.len(), self.max_size + 1));
        }
        let mut inverses = Vec::with_capacity(changes.len());
        for (m, c) in changes.iter().enumerate() {
            if c.shape() != (self.ranks[m], self.ranks[m]) {
                return Err(FunctorError::shape(
                    format!("change of basis at size {m}"),
                    (self.ranks[m], self.ranks[m]),
                    c.shape(),
                ));
            }
            inverses.push(inverse(c).ok_or(FunctorError::NotInvertible(m))?);
        }
        let rule = ConjugateRule { base: self.clone(), changes, inverses };
        Ok(FunctorData::from_rule(self.ring, self.max_size, self.ranks.clone(), Arc::new(rule)))
    }

    /// Builds a functor from an action table. The table must contain the
    /// generators of every size; other maps are filled in by composition.
    pub fn from_table(
        ring: RingSpec,
        max_size: usize,
        ranks: Vec<usize>,
        table: HashMap<PointedMap, ExactMatrix>,
    ) -> Result<FunctorData, FunctorError> {
        if ranks.len() != max_size + 1 {
            return Err(FunctorError::SizeMismatch(ranks.len(), max_size + 1));
        }
        for (map, mat) in &table {
            check_entry(ring, &ranks, max_size, map.source(), map.target(), mat, &format!("{map}"))?;
        }
        let generators = pointed_generators(max_size);
        let table = close_under_generators(
            table,
            (0..=max_size).map(|m| (PointedMap::identity(m), ExactMatrix::identity(ring, ranks[m]))),
            &generators,
            |g, f| g.compose(f).unwrap(),
            |m| m.target(),
            |m| m.source(),
        )?;
        let expected: usize = (0..=max_size).flat_map(|a| (0..=max_size).map(move |b| (b + 1).pow(a as u32))).sum();
        debug_assert_eq!(table.len(), expected);
        let rule = TableRule { table };
        Ok(FunctorData::from_rule(ring, max_size, ranks, Arc::new(rule)))
    }

    /// The full action table (every pointed map of sizes `≤ N`).
    pub fn action_table(&self) -> Vec<(PointedMap, Arc<ExactMatrix>)> {
        let mut out = Vec::new();
        for a in 0..=self.max_size {
            for b in 0..=self.max_size {
                for f in enumerate_pointed_maps(a, b, usize::MAX).unwrap() {
                    let m = self.action(&f);
                    out.push((f, m));
                }
            }
        }
        out
    }
}

fn check_entry(
    ring: RingSpec,
    ranks: &[usize],
    max_size: usize,
    source: usize,
    target: usize,
    mat: &ExactMatrix,
    label: &str,
) -> Result<(), FunctorError> {
    if source > max_size || target > max_size {
        return Err(FunctorError::OutOfRange(label.to_string(), max_size));
    }
    if mat.ring() != ring {
        return Err(FunctorError::RingMismatch(ring, mat.ring()));
    }
    let expected = (ranks[target], ranks[source]);
    if mat.shape() != expected {
        return Err(FunctorError::shape(label.to_string(), expected, mat.shape()));
    }
    Ok(())
}

/// Extends a partial action table to every morphism reachable from the
/// identities by post-composition with generators.
fn close_under_generators<K>(
    mut table: HashMap<K, ExactMatrix>,
    identities: impl Iterator<Item = (K, ExactMatrix)>,
    generators: &[K],
    compose: impl Fn(&K, &K) -> K,
    target: impl Fn(&K) -> usize,
    source: impl Fn(&K) -> usize,
) -> Result<HashMap<K, ExactMatrix>, FunctorError>
where
    K: Clone + Eq + std::hash::Hash + fmt::Debug,
{
    for g in generators {
        if !table.contains_key(g) {
            return Err(FunctorError::MissingAction(format!("{g:?}")));
        }
    }
    let mut queue = VecDeque::new();
    let mut seen = HashSet::new();
    for (id, mat) in identities {
        table.entry(id.clone()).or_insert(mat);
        seen.insert(id.clone());
        queue.push_back(id);
    }
    while let Some(f) = queue.pop_front() {
        for g in generators.iter().filter(|g| source(g) == target(&f)) {
            let h = compose(g, &f);
            if seen.insert(h.clone()) {
                if !table.contains_key(&h) {
                    let mat = &table[g] * &table[&f];
                    table.insert(h.clone(), mat);
                }
                queue.push_back(h);
            }
        }
    }
    Ok(table)
}

struct ConstantRule {
    ring: RingSpec,
    rank: usize,
}

impl ActionRule for ConstantRule {
    fn evaluate(&self, _: &PointedMap) -> ExactMatrix {
        ExactMatrix::identity(self.ring, self.rank)
    }

    fn name(&self) -> &'static str {
        "constant"
    }
}

struct ConjugateRule {
    base: FunctorData,
    changes: Vec<ExactMatrix>,
    inverses: Vec<ExactMatrix>,
}

impl ActionRule for ConjugateRule {
    fn evaluate(&self, map: &PointedMap) -> ExactMatrix {
        let g = self.base.action(map);
        &(&self.changes[map.target()] * &g) * &self.inverses[map.source()]
    }

    fn name(&self) -> &'static str {
        "conjugate"
    }
}

struct DirectSumRule {
    ring: RingSpec,
    parts: Vec<FunctorData>,
}

impl ActionRule for DirectSumRule {
    fn evaluate(&self, map: &PointedMap) -> ExactMatrix {
        let blocks: Vec<Arc<ExactMatrix>> = self.parts.iter().map(|p| p.action(map)).collect();
        let refs: Vec<&ExactMatrix> = blocks.iter().map(|b| b.as_ref()).collect();
        ExactMatrix::block_diag(self.ring, &refs)
    }

    fn name(&self) -> &'static str {
        "direct_sum"
    }
}

struct TableRule {
    table: HashMap<PointedMap, ExactMatrix>,
}

impl ActionRule for TableRule {
    fn evaluate(&self, map: &PointedMap) -> ExactMatrix {
        self.table[map].clone()
    }

    fn name(&self) -> &'static str {
        "explicit"
    }
}

struct OverrideRule {
    base: FunctorData,
    map: PointedMap,
    matrix: ExactMatrix,
}

impl ActionRule for OverrideRule {
    fn evaluate(&self, map: &PointedMap) -> ExactMatrix {
        if *map == self.map {
            self.matrix.clone()
        } else {
            self.base.action(map).as_ref().clone()
        }
    }

    fn name(&self) -> &'static str {
        "override"
    }
}

/// `L_{m'} G(ξ) K_m`: the action on a family of sub- or quotient modules
/// described by `inject[m]` (into `G(m)`) and `project[m]` (out of `G(m)`).
pub(crate) struct InducedRule {
    pub base: FunctorData,
    pub inject: Vec<ExactMatrix>,
    pub project: Vec<ExactMatrix>,
    pub name: &'static str,
}

impl ActionRule for InducedRule {
    fn evaluate(&self, map: &PointedMap) -> ExactMatrix {
        let g = self.base.action(map);
        &(&self.project[map.target()] * &g) * &self.inject[map.source()]
    }

    fn name(&self) -> &'static str {
        self.name
    }
}

/// The constant functor of rank `r`: identity on every map.
pub fn constant_functor(ring: RingSpec, max_size: usize, r: usize) -> FunctorData {
    FunctorData::from_rule(ring, max_size, vec![r; max_size + 1], Arc::new(ConstantRule { ring, rank: r }))
}

pub fn direct_sum(parts: &[&FunctorData]) -> Result<FunctorData, FunctorError> {
    let first = parts.first().ok_or(FunctorError::EmptySum)?;
    let (ring, n) = (first.ring, first.max_size);
    for p in parts {
        if p.ring != ring {
            return Err(FunctorError::RingMismatch(ring, p.ring));
        }
        if p.max_size != n {
            return Err(FunctorError::SizeMismatch(p.max_size, n));
        }
    }
    let ranks = (0..=n).map(|m| parts.iter().map(|p| p.ranks[m]).sum()).collect();
    let rule = DirectSumRule { ring, parts: parts.iter().map(|p| (*p).clone()).collect() };
    Ok(FunctorData::from_rule(ring, n, ranks, Arc::new(rule)))
}

/// A functor on `FinSetSurj_{≤N}`: the isolated object `∅` (size 0) and the
/// nonempty sizes `1..=N` with surjections. Every action is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjFunctorData {
    ring: RingSpec,
    max_size: usize,
    ranks: Vec<usize>,
    table: HashMap<Surjection, ExactMatrix>,
}

/// Every surjection between nonempty sizes `≤ n`, by source then target.
pub fn all_surjections(n: usize) -> Vec<Surjection> {
    let mut out = Vec::new();
    for m in 1..=n {
        for k in 1..=m {
            out.extend(enumerate_surjections(m, k));
        }
    }
    out
}

impl SurjFunctorData {
    /// Evaluates `f` on every surjection. No functoriality check is made;
    /// see [`SurjFunctorData::validate`].
    pub fn from_fn(
        ring: RingSpec,
        max_size: usize,
        ranks: Vec<usize>,
        mut f: impl FnMut(&Surjection) -> ExactMatrix,
    ) -> Self {
        assert_eq!(ranks.len(), max_size + 1, "one rank per size 0..=N");
        let table = all_surjections(max_size).into_iter().map(|s| {
            let m = f(&s);
            (s, m)
        });
        SurjFunctorData { ring, max_size, ranks, table: table.collect() }
    }

    /// Builds the functor from a table containing at least the generators
    /// (transposition, cycle and collapse at each size); the remaining
    /// surjections are filled in by composition.
    pub fn from_table(
        ring: RingSpec,
        max_size: usize,
        ranks: Vec<usize>,
        table: HashMap<Surjection, ExactMatrix>,
    ) -> Result<Self, FunctorError> {
        if ranks.len() != max_size + 1 {
            return Err(FunctorError::SizeMismatch(ranks.len(), max_size + 1));
        }
        for (s, mat) in &table {
            check_entry(ring, &ranks, max_size, s.source(), s.target(), mat, &format!("{s:?}"))?;
        }
        let table = close_under_generators(
            table,
            (1..=max_size).map(|m| (Surjection::identity(m), ExactMatrix::identity(ring, ranks[m]))),
            &surjection_generators(max_size),
            |g, f| g.compose(f).unwrap(),
            |s| s.target(),
            |s| s.source(),
        )?;
        Ok(SurjFunctorData { ring, max_size, ranks, table })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, m: usize) -> usize {
        self.ranks[m]
    }

    pub fn action(&self, s: &Surjection) -> &ExactMatrix {
        &self.table[s]
    }

    /// All surjections with their matrices, in enumeration order.
    pub fn entries(&self) -> Vec<(Surjection, &ExactMatrix)> {
        all_surjections(self.max_size)
            .into_iter()
            .map(|s| {
                let m = &self.table[&s];
                (s, m)
            })
            .collect()
    }

    /// The restriction to sizes `≤ n`.
    pub fn truncate(&self, n: usize) -> SurjFunctorData {
        let table = self.table.iter().filter(|(s, _)| s.source() <= n).map(|(s, m)| (s.clone(), m.clone())).collect();
        SurjFunctorData { ring: self.ring, max_size: n, ranks: self.ranks[..=n].to_vec(), table }
    }

    /// The functor transported along `changes[m]`: `s ↦ C_{m'} F(s) C_m^{-1}`.
    pub fn conjugate(&self, changes: &[ExactMatrix]) -> Result<SurjFunctorData, FunctorError> {
        let inverses = changes
            .iter()
            .enumerate()
            .map(|(m, c)| inverse(c).ok_or(FunctorError::NotInvertible(m)))
            .collect::<Result<Vec<_>, _>>()?;
        let table =
            self.table.iter().map(|(s, f)| (s.clone(), &(&changes[s.target()] * f) * &inverses[s.source()])).collect();
        Ok(SurjFunctorData { ring: self.ring, max_size: self.max_size, ranks: self.ranks.clone(), table })
    }

    /// First failure of the identity or composition law, checked on every
    /// pair (generator, surjection). That family of pairs is enough: any
    /// composite factors through generators one at a time.
    pub fn validate(&self) -> Option<String> {
        for m in 1..=self.max_size {
            if !self.table[&Surjection::identity(m)].is_identity() {
                return Some(format!("identity law fails at size {m}"));
            }
        }
        let gens = surjection_generators(self.max_size);
        for f in all_surjections(self.max_size) {
            for g in gens.iter().filter(|g| g.source() == f.target()) {
                let h = g.compose(&f).unwrap();
                if self.table[&h] != &self.table[g] * &self.table[&f] {
                    return Some(format!("F({g:?} o {f:?}) != F({g:?}) F({f:?})"));
                }
            }
        }
        None
    }
}

/// A natural transformation between functors with the same ring and bound.
#[derive(Clone, Debug)]
pub struct NatTransform {
    source: FunctorData,
    target: FunctorData,
    components: Vec<ExactMatrix>,
}

impl NatTransform {
    /// Checks shapes and the naturality square of every generator, which
    /// implies naturality for all maps.
    pub fn new(
        source: FunctorData,
        target: FunctorData,
        components: Vec<ExactMatrix>,
    ) -> Result<NatTransform, FunctorError> {
        if source.ring != target.ring {
            return Err(FunctorError::RingMismatch(source.ring, target.ring));
        }
        if source.max_size != target.max_size || components.len() != source.max_size + 1 {
            return Err(FunctorError::SizeMismatch(source.max_size, target.max_size));
        }
        for (m, c) in components.iter().enumerate() {
            let expected = (target.ranks[m], source.ranks[m]);
            if c.shape() != expected {
                return Err(FunctorError::shape(format!("component at size {m}"), expected, c.shape()));
            }
        }
        let t = NatTransform { source, target, components };
        if let Some(g) = t.first_unnatural() {
            return Err(FunctorError::NotNatural(format!("{g}")));
        }
        Ok(t)
    }

    pub fn identity(g: &FunctorData) -> NatTransform {
        let components = g.ranks.iter().map(|&r| ExactMatrix::identity(g.ring, r)).collect();
        NatTransform { source: g.clone(), target: g.clone(), components }
    }

    pub fn zero(source: &FunctorData, target: &FunctorData) -> Result<NatTransform, FunctorError> {
        let components =
            (0..=source.max_size).map(|m| ExactMatrix::zeros(source.ring, target.ranks[m], source.ranks[m])).collect();
        NatTransform::new(source.clone(), target.clone(), components)
    }

    pub fn source(&self) -> &FunctorData {
        &self.source
    }

    pub fn target(&self) -> &FunctorData {
        &self.target
    }

    pub fn components(&self) -> &[ExactMatrix] {
        &self.components
    }

    pub fn component(&self, m: usize) -> &ExactMatrix {
        &self.components[m]
    }

    fn first_unnatural(&self) -> Option<PointedMap> {
        pointed_generators(self.source.max_size).into_iter().find(|g| {
            let (a, b) = (g.source(), g.target());
            &*self.target.action(g) * &self.components[a] != &self.components[b] * &*self.source.action(g)
        })
    }

    /// Every component is invertible over the ring.
    pub fn is_isomorphism(&self) -> bool {
        self.components.iter().all(crate::exactlin::is_invertible)
    }
}
