//! Finite groups realized by permutation generators with a full element table.
//!
//! Elements are addressed by index into the table; all arithmetic after
//! construction is table lookup. Index 0 is always the identity and the table
//! order is the breadth-first closure order over the generators, so indices
//! are stable for a fixed catalog entry.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::perm::Permutation;

/// Identifier of a catalog group: order, catalog index and a display name.
///
/// Index 0 means "not drawn from the standard small-group numbering"; any
/// other value mirrors the usual `G(order, index)` naming.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupLabel {
    pub order: u32,
    pub index: u32,
    pub name: String,
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.order, self.index, self.name)
    }
}

pub type ElementId = u16;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("generator closure exceeded declared order {declared}")]
    ClosureExceedsOrder { declared: usize },
    #[error("generator closure produced {actual} elements, declared order {declared}")]
    OrderMismatch { actual: usize, declared: usize },
    #[error("element not in group")]
    NotAnElement,
    #[error(transparent)]
    Perm(#[from] crate::perm::PermError),
}

/// A finite group with complete element and multiplication tables.
pub struct FiniteGroup {
    label: GroupLabel,
    degree: usize,
    generators: Vec<ElementId>,
    elements: Vec<Permutation>,
    index_of: HashMap<Permutation, ElementId>,
    mult: Vec<ElementId>,
    inverse: Vec<ElementId>,
    order_of: Vec<u32>,
    class_of: Vec<u32>,
    class_reps: Vec<ElementId>,
    class_sizes: Vec<u32>,
}

impl FiniteGroup {
    /// Closes the generators, builds all tables, and checks the declared order.
    pub fn from_generators(
        label: GroupLabel,
        degree: usize,
        generator_perms: Vec<Permutation>,
    ) -> Result<Self, GroupError> {
        let declared = label.order as usize;
        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index_of = HashMap::new();
        index_of.insert(identity, 0 as ElementId);

        // breadth-first closure: multiply known elements by generators on the right
        let mut frontier = 0usize;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            for gen in &generator_perms {
                let product = current.compose(gen)?;
                if !index_of.contains_key(&product) {
                    if elements.len() >= declared {
                        return Err(GroupError::ClosureExceedsOrder { declared });
                    }
                    index_of.insert(product.clone(), elements.len() as ElementId);
                    elements.push(product);
                }
            }
            frontier += 1;
        }
        if elements.len() != declared {
            return Err(GroupError::OrderMismatch {
                actual: elements.len(),
                declared,
            });
        }

        let n = elements.len();
        let mut mult = vec![0 as ElementId; n * n];
        for i in 0..n {
            for j in 0..n {
                let product = elements[i].compose(&elements[j])?;
                mult[i * n + j] = index_of[&product];
            }
        }
        let mut inverse = vec![0 as ElementId; n];
        for i in 0..n {
            inverse[i] = index_of[&elements[i].inverse()];
        }
        let mut order_of = vec![0u32; n];
        for i in 0..n {
            let mut power = i as ElementId;
            let mut k = 1u32;
            while power != 0 {
                power = mult[power as usize * n + i];
                k += 1;
            }
            order_of[i] = k;
        }

        // conjugacy classes by orbit closure
        let mut class_of = vec![u32::MAX; n];
        let mut class_reps = Vec::new();
        let mut class_sizes = Vec::new();
        for i in 0..n {
            if class_of[i] != u32::MAX {
                continue;
            }
            let class_id = class_reps.len() as u32;
            class_reps.push(i as ElementId);
            let mut size = 0u32;
            let mut stack = vec![i as ElementId];
            class_of[i] = class_id;
            size += 1;
            while let Some(x) = stack.pop() {
                for g in 0..n {
                    let gx = mult[g * n + x as usize];
                    let conj = mult[gx as usize * n + inverse[g] as usize];
                    if class_of[conj as usize] == u32::MAX {
                        class_of[conj as usize] = class_id;
                        size += 1;
                        stack.push(conj);
                    }
                }
            }
            class_sizes.push(size);
        }

        let generators = generator_perms
            .iter()
            .map(|p| index_of[p])
            .collect();

        Ok(FiniteGroup {
            label,
            degree,
            generators,
            elements,
            index_of,
            mult,
            inverse,
            order_of,
            class_of,
            class_reps,
            class_sizes,
        })
    }

    pub fn label(&self) -> &GroupLabel {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[ElementId] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn permutation(&self, id: ElementId) -> &Permutation {
        &self.elements[id as usize]
    }

    pub fn element_id(&self, perm: &Permutation) -> Option<ElementId> {
        self.index_of.get(perm).copied()
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.mult[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: ElementId) -> ElementId {
        self.inverse[a as usize]
    }

    #[inline]
    pub fn conj(&self, a: ElementId, by: ElementId) -> ElementId {
        self.mul(self.mul(by, a), self.inv(by))
    }

    pub fn pow(&self, a: ElementId, k: i64) -> ElementId {
        let ord = self.order_of[a as usize] as i64;
        let mut k = k.rem_euclid(ord);
        let mut result = 0 as ElementId;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        result
    }

    /// Smallest k >= 1 with g^k = identity.
    pub fn element_order(&self, g: ElementId) -> u32 {
        self.order_of[g as usize]
    }

    /// Checked variant used by the public API surface.
    pub fn element_order_checked(&self, g: &Permutation) -> Result<u32, GroupError> {
        let id = self.element_id(g).ok_or(GroupError::NotAnElement)?;
        Ok(self.element_order(id))
    }

    pub fn class_id(&self, g: ElementId) -> u32 {
        self.class_of[g as usize]
    }

    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }

    pub fn class_representatives(&self) -> &[ElementId] {
        &self.class_reps
    }

    pub fn class_size(&self, class_id: u32) -> u32 {
        self.class_sizes[class_id as usize]
    }

    /// The partition of the elements into conjugacy classes, each class sorted.
    pub fn conjugacy_classes(&self) -> Vec<Vec<ElementId>> {
        let mut classes = vec![Vec::new(); self.class_reps.len()];
        for id in 0..self.order() {
            classes[self.class_of[id] as usize].push(id as ElementId);
        }
        classes
    }

    /// Elements of each order, as a map order -> sorted ids.
    pub fn elements_of_order(&self, order: u32) -> Vec<ElementId> {
        (0..self.order() as ElementId)
            .filter(|&id| self.order_of[id as usize] == order)
            .collect()
    }

    /// Smallest subset containing `seed` and the identity, closed under
    /// product and inverse. Returned sorted.
    pub fn subgroup_generated(&self, seed: &[ElementId]) -> Vec<ElementId> {
        let mut member = BitSet::new(self.order());
        member.insert(0);
        let mut list = vec![0 as ElementId];
        let mut stack: Vec<ElementId> = Vec::new();
        for &s in seed {
            if member.insert(s as usize) {
                list.push(s);
                stack.push(s);
            }
        }
        // close under products with known members (inverses come for free in
        // a finite group)
        let mut frontier = 0usize;
        while frontier < list.len() {
            let x = list[frontier];
            frontier += 1;
            let snapshot = list.len();
            for idx in 0..snapshot {
                let y = list[idx];
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if member.insert(z as usize) {
                        list.push(z);
                    }
                }
            }
        }
        list.sort_unstable();
        list
    }

    /// True when `seed` generates the whole group.
    pub fn generates(&self, seed: &[ElementId]) -> bool {
        self.subgroup_generated(seed).len() == self.order()
    }

    /// Canonical factorization of every element as a word in the generators,
    /// following the breadth-first closure tree. Entry `i` is the list of
    /// generator positions whose product (left to right) equals element `i`.
    pub fn factorizations(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut parent: Vec<Option<(ElementId, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0 as ElementId]);
        while let Some(x) = queue.pop_front() {
            for (pos, &g) in self.generators.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    parent[y as usize] = Some((x, pos));
                    queue.push_back(y);
                }
            }
        }
        (0..n)
            .map(|mut id| {
                let mut word = Vec::new();
                while let Some((prev, pos)) = parent[id] {
                    word.push(pos);
                    id = prev as usize;
                }
                word.reverse();
                word
            })
            .collect()
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({})", self.label)
    }
}

/// Dense bitset sized for group orders in the catalog range.
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(capacity: usize) -> Self {
        BitSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    /// Returns true when the bit was newly set.
    pub fn insert(&mut self, bit: usize) -> bool {
        let (w, b) = (bit / 64, bit % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, bit: usize) -> bool {
        self.words[bit / 64] & (1 << (bit % 64)) != 0
    }
}

/// An automorphism stored as the image of every element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementMap {
    pub images: Vec<ElementId>,
}

impl ElementMap {
    pub fn apply(&self, id: ElementId) -> ElementId {
        self.images[id as usize]
    }
}

impl fmt::Debug for ElementMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ElementMap{:?}", &self.images[..self.images.len().min(8)])
    }
}

/// Limits for the brute-force automorphism search. The defaults cover every
/// group shipped in the catalog.
#[derive(Clone, Copy, Debug)]
pub struct AutBounds {
    pub max_order: usize,
    pub max_generators: usize,
}

impl Default for AutBounds {
    fn default() -> Self {
        AutBounds {
            max_order: 384,
            max_generators: 6,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("automorphism group not computed: {order} elements / {generators} generators exceed the configured bound")]
pub struct AutNotComputed {
    pub order: usize,
    pub generators: usize,
}

/// All automorphisms of `group` by backtracking over generator images.
///
/// Candidate images are restricted to elements of equal order and conjugacy
/// class size; a candidate assignment is extended to the whole element table
/// through the factorization tree and verified on every (element, generator)
/// product.
pub fn automorphisms(group: &FiniteGroup, bounds: AutBounds) -> Result<Vec<ElementMap>, AutNotComputed> {
    let n = group.order();
    let gens = group.generators();
    if n > bounds.max_order || gens.len() > bounds.max_generators {
        return Err(AutNotComputed {
            order: n,
            generators: gens.len(),
        });
    }
    if n == 1 {
        return Ok(vec![ElementMap { images: vec![0] }]);
    }

    let factorizations = group.factorizations();
    let mut candidates: Vec<Vec<ElementId>> = Vec::with_capacity(gens.len());
    for &g in gens {
        let order = group.element_order(g);
        let class_size = group.class_size(group.class_id(g));
        candidates.push(
            (0..n as ElementId)
                .filter(|&x| {
                    group.element_order(x) == order
                        && group.class_size(group.class_id(x)) == class_size
                })
                .collect(),
        );
    }

    let mut found = Vec::new();
    let mut chosen = vec![0 as ElementId; gens.len()];
    backtrack_aut(group, &factorizations, &candidates, &mut chosen, 0, &mut found);
    found.sort();
    Ok(found)
}

fn backtrack_aut(
    group: &FiniteGroup,
    factorizations: &[Vec<usize>],
    candidates: &[Vec<ElementId>],
    chosen: &mut Vec<ElementId>,
    depth: usize,
    found: &mut Vec<ElementMap>,
) {
    if depth == candidates.len() {
        if let Some(map) = try_extend(group, factorizations, chosen) {
            found.push(map);
        }
        return;
    }
    for &cand in &candidates[depth] {
        chosen[depth] = cand;
        backtrack_aut(group, factorizations, candidates, chosen, depth + 1, found);
    }
}

/// Extends generator images along the factorization tree and verifies the
/// homomorphism property on every (element, generator) pair.
fn try_extend(
    group: &FiniteGroup,
    factorizations: &[Vec<usize>],
    gen_images: &[ElementId],
) -> Option<ElementMap> {
    let n = group.order();
    let mut images = vec![0 as ElementId; n];
    let mut hit = vec![false; n];
    for id in 0..n {
        let mut img = 0 as ElementId;
        for &pos in &factorizations[id] {
            img = group.mul(img, gen_images[pos]);
        }
        images[id] = img;
        // injectivity via pigeonhole
        if std::mem::replace(&mut hit[img as usize], true) {
            return None;
        }
    }
    for id in 0..n {
        for (pos, &g) in group.generators().iter().enumerate() {
            let lhs = images[group.mul(id as ElementId, g) as usize];
            let rhs = group.mul(images[id], gen_images[pos]);
            if lhs != rhs {
                return None;
            }
        }
    }
    Some(ElementMap { images })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: u16) -> FiniteGroup {
        let images: Vec<u16> = (1..=n).map(|i| i % n + 1).collect();
        FiniteGroup::from_generators(
            GroupLabel {
                order: n as u32,
                index: 1,
                name: format!("Z{n}"),
            },
            n as usize,
            vec![Permutation::from_images(images).unwrap()],
        )
        .unwrap()
    }

    fn sym3() -> FiniteGroup {
        FiniteGroup::from_generators(
            GroupLabel {
                order: 6,
                index: 1,
                name: "S3".into(),
            },
            3,
            vec![
                Permutation::from_images(vec![2, 3, 1]).unwrap(),
                Permutation::from_images(vec![2, 1, 3]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn closure_and_orders() {
        let z5 = cyclic(5);
        assert_eq!(z5.order(), 5);
        assert_eq!(z5.element_order(0), 1);
        for id in 1..5 {
            assert_eq!(z5.element_order(id), 5);
        }
    }

    #[test]
    fn declared_order_mismatch_is_an_error() {
        // the 3-cycle generates only 3 of the declared 6 elements
        let result = FiniteGroup::from_generators(
            GroupLabel {
                order: 6,
                index: 0,
                name: "bogus".into(),
            },
            3,
            vec![Permutation::from_images(vec![2, 3, 1]).unwrap()],
        );
        assert!(matches!(result, Err(GroupError::OrderMismatch { actual: 3, declared: 6 })));
    }

    #[test]
    fn sym3_classes() {
        let g = sym3();
        let mut sizes: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        // class sizes divide the order and sum to it
        assert_eq!(sizes.iter().sum::<usize>(), 6);
    }

    #[test]
    fn subgroup_closure() {
        let g = sym3();
        assert_eq!(g.subgroup_generated(&[]), vec![0]);
        let transpositions = g.elements_of_order(2);
        assert_eq!(transpositions.len(), 3);
        let two = [transpositions[0], transpositions[1]];
        assert_eq!(g.subgroup_generated(&two).len(), 6);
        // Lagrange on every single-element closure
        for id in 0..g.order() as ElementId {
            assert_eq!(g.order() % g.subgroup_generated(&[id]).len(), 0);
        }
    }

    #[test]
    fn automorphism_counts() {
        let trivial = FiniteGroup::from_generators(
            GroupLabel {
                order: 1,
                index: 1,
                name: "1".into(),
            },
            1,
            vec![],
        )
        .unwrap();
        assert_eq!(automorphisms(&trivial, AutBounds::default()).unwrap().len(), 1);

        let z5 = cyclic(5);
        assert_eq!(automorphisms(&z5, AutBounds::default()).unwrap().len(), 4);

        let v4 = FiniteGroup::from_generators(
            GroupLabel {
                order: 4,
                index: 2,
                name: "Z2xZ2".into(),
            },
            4,
            vec![
                Permutation::from_images(vec![2, 1, 3, 4]).unwrap(),
                Permutation::from_images(vec![1, 2, 4, 3]).unwrap(),
            ],
        )
        .unwrap();
        let auts = automorphisms(&v4, AutBounds::default()).unwrap();
        assert_eq!(auts.len(), 6);
        // closed under composition
        for a in &auts {
            for b in &auts {
                let composed = ElementMap {
                    images: (0..4).map(|i| a.apply(b.apply(i as ElementId))).collect(),
                };
                assert!(auts.contains(&composed));
            }
        }
    }

    #[test]
    fn bound_exceeded_is_explicit() {
        let z5 = cyclic(5);
        let result = automorphisms(
            &z5,
            AutBounds {
                max_order: 4,
                max_generators: 6,
            },
        );
        assert!(result.is_err());
    }
}
