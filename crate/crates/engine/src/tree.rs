//! Intersection of `∏_v I_v` with the kernels of the functionals `Σ_v φ_v`
//! by recursive splitting into subproducts.
//!
//! A node is a product `∏_v X_v`. For the next functional each `X_v` splits
//! into `X_v⁰ ∪ X_v¹` by the value of `φ_v`, and the children are the
//! products `∏_v X_v^{a_v}` over parity vectors `a` with `Σ_v a_v = 0` and
//! all factors nonempty. Places outside the support of the functional take
//! `a_v = 0`.

use std::collections::BTreeSet;

use bm_arith::f2::F2Vec;

use crate::error::{EngineError, Result};

/// A functional on `∏_v` of the local spaces together with its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    /// `values[v]` pairs with classes at place `v`
    pub values: Vec<F2Vec>,
    pub support: Vec<bool>,
}

impl Functional {
    fn support_size(&self) -> usize {
        self.support.iter().filter(|&&b| b).count()
    }
}

/// `∏_v X_v` with each `X_v` given by indices into the image at `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subproduct {
    pub sets: Vec<Vec<usize>>,
    /// number of functionals imposed
    pub depth: usize,
}

impl Subproduct {
    pub fn is_empty(&self) -> bool {
        self.sets.iter().any(|s| s.is_empty())
    }

    pub fn size(&self) -> u128 {
        self.sets.iter().map(|s| s.len() as u128).product()
    }
}

struct Search<'a> {
    images: &'a [Vec<F2Vec>],
    phis: Vec<&'a Functional>,
    budget: u64,
    nodes: u64,
    leaves: Vec<Subproduct>,
}

impl Search<'_> {
    fn visit(&mut self, node: Subproduct) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(EngineError::NodeBudget(self.budget));
        }
        if node.depth == self.phis.len() {
            self.leaves.push(node);
            return Ok(());
        }
        let phi = self.phis[node.depth];
        let nplaces = node.sets.len();
        let mut parts: Vec<[Vec<usize>; 2]> = Vec::with_capacity(nplaces);
        for v in 0..nplaces {
            let mut split = [Vec::new(), Vec::new()];
            for &i in &node.sets[v] {
                let bit = phi.support[v] && phi.values[v].dot(&self.images[v][i]);
                split[bit as usize].push(i);
            }
            parts.push(split);
        }
        // places with a choice; the others are forced or kill the node
        let mut free = Vec::new();
        let mut forced = vec![0usize; nplaces];
        let mut parity = 0usize;
        for (v, split) in parts.iter().enumerate() {
            match (split[0].is_empty(), split[1].is_empty()) {
                (true, true) => return Ok(()),
                (false, true) => forced[v] = 0,
                (true, false) => {
                    forced[v] = 1;
                    parity ^= 1;
                }
                (false, false) => free.push(v),
            }
        }
        if free.is_empty() && parity == 1 {
            return Ok(());
        }
        for mask in 0u64..(1u64 << free.len()) {
            if (mask.count_ones() as usize + parity) % 2 == 1 {
                continue;
            }
            let mut a = forced.clone();
            for (j, &v) in free.iter().enumerate() {
                a[v] = ((mask >> j) & 1) as usize;
            }
            let sets = (0..nplaces).map(|v| parts[v][a[v]].clone()).collect();
            self.visit(Subproduct { sets, depth: node.depth + 1 })?;
        }
        Ok(())
    }
}

/// Nonempty leaves of the subproduct tree, with the number of nodes visited.
/// Functionals are imposed in order of increasing support size.
pub fn subproduct_intersect(images: &[Vec<F2Vec>], phis: &[Functional], budget: u64) -> Result<(Vec<Subproduct>, u64)> {
    let mut order: Vec<&Functional> = phis.iter().collect();
    order.sort_by_key(|f| f.support_size());
    let root = Subproduct { sets: images.iter().map(|im| (0..im.len()).collect()).collect(), depth: 0 };
    if root.is_empty() {
        return Ok((Vec::new(), 1));
    }
    let mut s = Search { images, phis: order, budget, nodes: 0, leaves: Vec::new() };
    s.visit(root)?;
    Ok((s.leaves, s.nodes))
}

/// All index tuples covered by a list of subproducts.
pub fn survivor_tuples(leaves: &[Subproduct]) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for leaf in leaves {
        let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
        for set in &leaf.sets {
            acc = acc
                .into_iter()
                .flat_map(|t| {
                    set.iter().map(move |&i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        out.extend(acc);
    }
    out
}

/// Number of tuples in a list of disjoint subproducts.
pub fn survivor_count(leaves: &[Subproduct]) -> u128 {
    leaves.iter().map(|l| l.size()).sum()
}
