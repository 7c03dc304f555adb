//! Reduce-and-solve packagings.
//!
//! A reduce-and-solve procedure replaces each element `e` of the original
//! matroid by one or more refinements, solves a simpler problem on a refined
//! matroid restricted to one refinement per element, and maps the answer
//! back through the source map `g`. Refinement ids are assigned in source
//! order, so refinements of `e` precede those of `e + 1`.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use rand::RngCore;

use super::partition::{simple_partition_secretary, GeneralizedPartitionSecretary, Guard, PartitionRule};
use super::{OrderOblivious, Placement};
use crate::error::{invalid, Result};
use crate::matroid::matching::maximum_matching;
use crate::matroid::{mask, ConcreteMatroid, Matroid, PartitionMatroid};
use crate::overlap::precedes;
use crate::rng::check_probability;
use crate::scalar::Scalar;

pub type InnerFactory<W> = Arc<dyn Fn() -> Box<dyn OrderOblivious<W>> + Send + Sync>;

/// `(c^r, c^o, c^a)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RsParams {
    pub c_r: f64,
    pub c_o: f64,
    pub c_a: f64,
}

/// How to pick, for an independent set `B` of the original matroid, one
/// refinement per element of `B` so that the picks are independent in the
/// refined matroid.
#[derive(Clone, Debug)]
pub enum Witness {
    Identity,
    /// Root every tree of the forest at its smallest vertex and give each
    /// edge the refinement at its endpoint farther from the root.
    Rooted { endpoints: Vec<(usize, usize)> },
    /// Match elements to blocks. `options[e]` lists `(block, refinement)`.
    Matching { blocks: usize, options: Vec<Vec<(usize, usize)>> },
}

pub struct ReduceAndSolve<W> {
    name: &'static str,
    original: Arc<dyn Matroid>,
    refined: Arc<dyn Matroid>,
    refinements: Vec<Vec<usize>>,
    source: Arc<Vec<usize>>,
    params: RsParams,
    p: f64,
    factory: InnerFactory<W>,
    witness: Witness,
}

impl<W> Clone for ReduceAndSolve<W> {
    fn clone(&self) -> Self {
        ReduceAndSolve {
            name: self.name,
            original: self.original.clone(),
            refined: self.refined.clone(),
            refinements: self.refinements.clone(),
            source: self.source.clone(),
            params: self.params,
            p: self.p,
            factory: self.factory.clone(),
            witness: self.witness.clone(),
        }
    }
}

impl<W> fmt::Debug for ReduceAndSolve<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReduceAndSolve")
            .field("name", &self.name)
            .field("refined_size", &self.source.len())
            .field("params", &self.params)
            .field("p", &self.p)
            .finish()
    }
}

impl<W: Scalar> ReduceAndSolve<W> {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn original(&self) -> &Arc<dyn Matroid> {
        &self.original
    }

    pub fn refined(&self) -> &Arc<dyn Matroid> {
        &self.refined
    }

    pub fn ground_size(&self) -> usize {
        self.refinements.len()
    }

    pub fn refined_size(&self) -> usize {
        self.source.len()
    }

    /// `g⁻¹(e)`, ascending.
    pub fn refinements(&self, e: usize) -> &[usize] {
        &self.refinements[e]
    }

    /// `g(r)`.
    pub fn source(&self, r: usize) -> usize {
        self.source[r]
    }

    pub fn source_map(&self) -> &Arc<Vec<usize>> {
        &self.source
    }

    pub fn params(&self) -> RsParams {
        self.params
    }

    /// Sampling probability of the inner algorithm.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// The assignment picking the first refinement of every element.
    pub fn first_refinements(&self) -> Vec<usize> {
        self.refinements.iter().map(|r| r[0]).collect()
    }

    /// A fresh inner algorithm over refined ids.
    pub fn new_inner(&self) -> Box<dyn OrderOblivious<W>> {
        (self.factory)()
    }

    /// Wraps an inner algorithm so it runs on the restriction to `d(N)`
    /// while speaking source ids.
    pub fn assign(&self, inner: Box<dyn OrderOblivious<W>>, d: Vec<usize>) -> Assigned<W> {
        Assigned { inner, d, source: self.source.clone() }
    }

    pub fn instantiate(&self, d: Vec<usize>) -> Assigned<W> {
        self.assign(self.new_inner(), d)
    }

    /// An assignment `d` that picks the witness refinements on `b` (which
    /// must be independent in the original matroid) and the first
    /// refinement everywhere else. The witness picks are independent in the
    /// refined matroid.
    pub fn witness_assignment(&self, b: &[usize]) -> Result<Vec<usize>> {
        let mut d = self.first_refinements();
        match &self.witness {
            Witness::Identity => {}
            Witness::Rooted { endpoints } => {
                for (e, far) in rooted_orientation(endpoints, b)? {
                    let (u, _) = endpoints[e];
                    let pick = if far == u { 0 } else { 1 };
                    d[e] = self.refinements[e][pick];
                }
            }
            Witness::Matching { blocks, options } => {
                let adjacency: Vec<Vec<usize>> =
                    b.iter().map(|&e| options[e].iter().map(|o| o.0).collect()).collect();
                let views: Vec<&[usize]> = adjacency.iter().map(Vec::as_slice).collect();
                let matched = maximum_matching(&views, *blocks);
                for (i, &e) in b.iter().enumerate() {
                    let block = matched[i].ok_or_else(|| {
                        invalid(format!("element {e} cannot be matched; the set is dependent"))
                    })?;
                    d[e] = options[e].iter().find(|o| o.0 == block).expect("matched option").1;
                }
            }
        }
        Ok(d)
    }

    /// [`witness_assignment`](Self::witness_assignment), except that each
    /// element outside `b` gets, where one exists, a refinement spanned by
    /// the witness picks of the elements of `b` that precede it. If `b` is
    /// the optimum, it then stays the optimum of the restriction to `d(N)`.
    pub fn covering_assignment(&self, b: &[usize], weights: &[W]) -> Result<Vec<usize>> {
        let mut d = self.witness_assignment(b)?;
        let in_b = mask(self.ground_size(), b);
        for e in (0..self.ground_size()).filter(|&e| !in_b[e]) {
            let prefix: Vec<usize> = b
                .iter()
                .filter(|&&o| precedes(o, &weights[o], e, &weights[e]))
                .map(|&o| d[o])
                .collect();
            let spanned = self.refinements[e].iter().copied().find(|&r| {
                let mut probe = prefix.clone();
                probe.push(r);
                !self.refined.independent(&probe)
            });
            if let Some(r) = spanned {
                d[e] = r;
            }
        }
        Ok(d)
    }
}

/// For each edge of the forest `b`, the endpoint farther from the root of
/// its tree; roots are the smallest vertex of each tree.
fn rooted_orientation(endpoints: &[(usize, usize)], b: &[usize]) -> Result<Vec<(usize, usize)>> {
    let vertices = endpoints.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices];
    for &e in b {
        let (u, v) = endpoints[e];
        if u == v {
            return Err(invalid(format!("edge {e} is a self-loop")));
        }
        incident[u].push((e, v));
        incident[v].push((e, u));
    }
    let mut seen = vec![false; vertices];
    let mut used = vec![false; endpoints.len()];
    let mut out = Vec::with_capacity(b.len());
    for root in 0..vertices {
        if seen[root] || incident[root].is_empty() {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(e, y) in &incident[x] {
                if std::mem::replace(&mut used[e], true) {
                    continue;
                }
                if std::mem::replace(&mut seen[y], true) {
                    return Err(invalid(format!("edge {e} closes a cycle; the set is dependent")));
                }
                out.push((e, y));
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

/// An inner algorithm running on `d(N)`, translated to source ids.
pub struct Assigned<W> {
    inner: Box<dyn OrderOblivious<W>>,
    d: Vec<usize>,
    source: Arc<Vec<usize>>,
}

impl<W> Assigned<W> {
    pub fn identity(inner: Box<dyn OrderOblivious<W>>, n: usize) -> Self {
        Assigned { inner, d: (0..n).collect(), source: Arc::new((0..n).collect()) }
    }

    pub fn d(&self) -> &[usize] {
        &self.d
    }

    /// Points `e` at refinement `r`. Must happen before `e` is shown or
    /// offered to the inner algorithm.
    pub fn set_refinement(&mut self, e: usize, r: usize) {
        debug_assert_eq!(self.source[r], e);
        self.d[e] = r;
    }

    /// Accepted refined ids, i.e. the inner algorithm's own view.
    pub fn refined_accepted(&self) -> Vec<usize> {
        self.inner.accepted()
    }

    pub fn refined_primary(&self) -> Vec<usize> {
        self.inner.primary()
    }
}

impl<W: Clone> OrderOblivious<W> for Assigned<W> {
    fn sample_size(&mut self, n: usize, rng: &mut dyn RngCore) -> usize {
        self.inner.sample_size(n, rng)
    }

    fn observe_sample(&mut self, sample: &[(usize, W)]) {
        let mapped: Vec<(usize, W)> = sample.iter().map(|(e, w)| (self.d[*e], w.clone())).collect();
        self.inner.observe_sample(&mapped);
    }

    fn offer(&mut self, e: usize, w: &W) -> bool {
        self.inner.offer(self.d[e], w)
    }

    fn place(&mut self, e: usize, placement: Placement) {
        self.inner.place(self.d[e], placement)
    }

    fn accepted(&self) -> Vec<usize> {
        self.inner.accepted().into_iter().map(|r| self.source[r]).collect()
    }

    fn primary(&self) -> Vec<usize> {
        self.inner.primary().into_iter().map(|r| self.source[r]).collect()
    }
}

/// Refinement bookkeeping shared by the refined constructions: per source
/// element a list of `Some(block)` (a real refinement) or `None` (a dummy
/// loop).
struct RefinedBuilder {
    refinements: Vec<Vec<usize>>,
    source: Vec<usize>,
    block_of: Vec<Option<usize>>,
}

impl RefinedBuilder {
    fn new() -> Self {
        RefinedBuilder { refinements: Vec::new(), source: Vec::new(), block_of: Vec::new() }
    }

    /// Adds the refinements of the next source element; an empty list gets
    /// a single dummy refinement.
    fn push(&mut self, blocks: &[usize]) {
        let e = self.refinements.len();
        let mut ids = Vec::new();
        let listed: Vec<Option<usize>> = if blocks.is_empty() {
            vec![None]
        } else {
            blocks.iter().copied().map(Some).collect()
        };
        for b in listed {
            ids.push(self.source.len());
            self.source.push(e);
            self.block_of.push(b);
        }
        self.refinements.push(ids);
    }

    fn partition(&self, blocks: usize) -> Result<PartitionMatroid> {
        let mut lists = vec![Vec::new(); blocks];
        for (r, b) in self.block_of.iter().enumerate() {
            if let Some(b) = b {
                lists[*b].push(r);
            }
        }
        PartitionMatroid::with_loops(self.source.len(), lists, vec![1; blocks])
    }
}

/// Graphic matroids: each edge `uv` becomes `e^u` and `e^v`, the refined
/// matroid is the simple partition by vertex, and the inner algorithm is
/// the partition rule with an acyclicity guard on the source edges.
/// Parameters `(1, p²(1−p), 0)`.
pub fn graphic_reduce_and_solve<W: Scalar>(
    m: &ConcreteMatroid,
    p: f64,
) -> Result<ReduceAndSolve<W>> {
    check_probability(p)?;
    let ConcreteMatroid::Graphic(g) = m else {
        return Err(invalid(format!(
            "graphic reduce-and-solve needs edge endpoints; got a {} matroid",
            m.family()
        )));
    };
    let mut builder = RefinedBuilder::new();
    let mut endpoints_by_refinement = Vec::new();
    for &(u, v) in g.edges() {
        if u == v {
            builder.push(&[]);
            endpoints_by_refinement.push((u, v));
        } else {
            builder.push(&[u, v]);
            endpoints_by_refinement.extend([(u, v), (u, v)]);
        }
    }
    let refined = builder.partition(g.vertex_count())?;
    let block_of = Arc::new(builder.block_of.clone());
    let guard = Guard::Forest {
        endpoints: Arc::new(endpoints_by_refinement),
        vertices: g.vertex_count(),
    };
    let factory: InnerFactory<W> = Arc::new(move || {
        Box::new(PartitionRule::<W>::new(block_of.clone(), p, guard.clone()).expect("p checked"))
    });
    Ok(ReduceAndSolve {
        name: "graphic",
        original: Arc::new(g.clone()),
        refined: Arc::new(refined),
        refinements: builder.refinements,
        source: Arc::new(builder.source),
        params: RsParams { c_r: 1.0, c_o: p * p * (1.0 - p), c_a: 0.0 },
        p,
        factory,
        witness: Witness::Rooted { endpoints: g.edges().to_vec() },
    })
}

/// Linear matroids with at most `k` nonzeros per column: column `c` becomes
/// `(c, r)` for each nonzero row `r`, the refined matroid is the simple
/// partition by row, and the inner algorithm refuses `(c, r)` once any row
/// of `c` is hit. Parameters `(1, p^k(1−p), 0)`; `p` defaults to `(k−1)/k`.
pub fn sparse_linear_reduce_and_solve<W: Scalar>(
    m: &ConcreteMatroid,
    k: usize,
    p: Option<f64>,
) -> Result<ReduceAndSolve<W>> {
    let ConcreteMatroid::Linear(lin) = m else {
        return Err(invalid(format!(
            "sparse linear reduce-and-solve needs a matrix; got a {} matroid",
            m.family()
        )));
    };
    if k == 0 {
        return Err(invalid("column sparsity bound must be at least 1"));
    }
    let p = p.unwrap_or((k - 1) as f64 / k as f64);
    check_probability(p)?;
    let mut builder = RefinedBuilder::new();
    let mut rows_by_refinement = Vec::new();
    let mut options = Vec::new();
    for c in 0..lin.ground_size() {
        let rows = lin.nonzero_rows(c);
        if rows.len() > k {
            return Err(invalid(format!(
                "column {c} has {} nonzeros, more than the sparsity bound {k}",
                rows.len()
            )));
        }
        let first = builder.source.len();
        builder.push(&rows);
        options.push(rows.iter().enumerate().map(|(i, &r)| (r, first + i)).collect());
        let count = rows.len().max(1);
        rows_by_refinement.extend(std::iter::repeat_n(rows.clone(), count));
    }
    let refined = builder.partition(lin.row_count())?;
    let block_of = Arc::new(builder.block_of.clone());
    let guard = Guard::Blocks { blocks: Arc::new(rows_by_refinement) };
    let factory: InnerFactory<W> = Arc::new(move || {
        Box::new(PartitionRule::<W>::new(block_of.clone(), p, guard.clone()).expect("p checked"))
    });
    Ok(ReduceAndSolve {
        name: "sparse-linear",
        original: Arc::new(lin.clone()),
        refined: Arc::new(refined),
        refinements: builder.refinements,
        source: Arc::new(builder.source),
        params: RsParams { c_r: 1.0, c_o: p.powi(k as i32) * (1.0 - p), c_a: 0.0 },
        p,
        factory,
        witness: Witness::Matching { blocks: lin.row_count(), options },
    })
}

/// Transversal matroids: each element becomes its incident edges, the
/// refined matroid is the simple partition by right node, and the inner
/// algorithm is the plain partition rule. Parameters `(1, p(1−p), 0)`.
pub fn transversal_reduce_and_solve<W: Scalar>(
    m: &ConcreteMatroid,
    p: f64,
) -> Result<ReduceAndSolve<W>> {
    check_probability(p)?;
    let ConcreteMatroid::Transversal(t) = m else {
        return Err(invalid(format!(
            "transversal reduce-and-solve needs the bipartite graph; got a {} matroid",
            m.family()
        )));
    };
    let mut builder = RefinedBuilder::new();
    let mut options = Vec::new();
    for e in 0..t.ground_size() {
        let first = builder.source.len();
        let nbrs = t.neighbours(e);
        builder.push(nbrs);
        options.push(nbrs.iter().enumerate().map(|(i, &r)| (r, first + i)).collect());
    }
    let refined = builder.partition(t.right_count())?;
    let block_of = Arc::new(builder.block_of.clone());
    let factory: InnerFactory<W> = Arc::new(move || {
        Box::new(PartitionRule::<W>::new(block_of.clone(), p, Guard::None).expect("p checked"))
    });
    Ok(ReduceAndSolve {
        name: "transversal",
        original: Arc::new(t.clone()),
        refined: Arc::new(refined),
        refinements: builder.refinements,
        source: Arc::new(builder.source),
        params: RsParams { c_r: 1.0, c_o: p * (1.0 - p), c_a: 0.0 },
        p,
        factory,
        witness: Witness::Matching { blocks: t.right_count(), options },
    })
}

fn identity<W: Scalar>(
    name: &'static str,
    original: Arc<dyn Matroid>,
    params: RsParams,
    p: f64,
    factory: InnerFactory<W>,
) -> ReduceAndSolve<W> {
    let n = original.ground_size();
    ReduceAndSolve {
        name,
        refined: original.clone(),
        original,
        refinements: (0..n).map(|e| vec![e]).collect(),
        source: Arc::new((0..n).collect()),
        params,
        p,
        factory,
        witness: Witness::Identity,
    }
}

/// The simple-partition algorithm with trivial refinements:
/// `(1, p(1−p), 0)`.
pub fn partition_reduce_and_solve<W: Scalar>(m: &ConcreteMatroid, p: f64) -> Result<ReduceAndSolve<W>> {
    let probe = simple_partition_secretary::<W>(m, p)?;
    let factory: InnerFactory<W> = Arc::new(move || Box::new(probe.clone()));
    Ok(identity(
        "partition",
        m.clone().into_oracle(),
        RsParams { c_r: 1.0, c_o: p * (1.0 - p), c_a: 0.0 },
        p,
        factory,
    ))
}

/// The capacity-aware partition algorithm with trivial refinements:
/// `(1, 1/4, 0)`.
pub fn generalized_partition_reduce_and_solve<W: Scalar>(
    m: &ConcreteMatroid,
) -> Result<ReduceAndSolve<W>> {
    if !matches!(m, ConcreteMatroid::Partition(_)) {
        return Err(invalid(format!(
            "the partition algorithm needs a partition matroid, got {}",
            m.family()
        )));
    }
    let oracle = m.clone().into_oracle();
    let inner = oracle.clone();
    let factory: InnerFactory<W> =
        Arc::new(move || Box::new(GeneralizedPartitionSecretary::<W>::new(inner.clone())));
    Ok(identity(
        "generalized-partition",
        oracle,
        RsParams { c_r: 1.0, c_o: 0.25, c_a: 0.0 },
        GeneralizedPartitionSecretary::<W>::P,
        factory,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{GraphicMatroid, LinearMatroid, TransversalMatroid};
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn graphic_parameters_and_refinements() {
        let m = ConcreteMatroid::Graphic(GraphicMatroid::new(2, vec![(0, 1)]).unwrap());
        let rs = graphic_reduce_and_solve::<i64>(&m, 2.0 / 3.0).unwrap();
        assert_eq!(rs.refinements(0).len(), 2);
        assert!((rs.params().c_o - 4.0 / 27.0).abs() < 1e-12);
        assert_eq!(rs.params().c_r, 1.0);
        let bad = ConcreteMatroid::Transversal(TransversalMatroid::new(1, vec![vec![0]]).unwrap());
        assert!(graphic_reduce_and_solve::<i64>(&bad, 0.5).is_err());
    }

    #[test]
    fn rooted_witness_on_k4_spanning_tree() {
        let m = ConcreteMatroid::Graphic(GraphicMatroid::complete(4));
        let rs = graphic_reduce_and_solve::<i64>(&m, 2.0 / 3.0).unwrap();
        let edges = GraphicMatroid::complete(4).edges().to_vec();
        // every spanning tree of K4: bases of the graphic matroid
        let mut trees = 0;
        for bits in 0u32..64 {
            let b: Vec<usize> = (0..6).filter(|i| bits >> i & 1 == 1).collect();
            if b.len() != 3 || !rs.original().independent(&b) {
                continue;
            }
            trees += 1;
            let d = rs.witness_assignment(&b).unwrap();
            let picks: Vec<usize> = b.iter().map(|&e| d[e]).collect();
            assert!(rs.refined().independent(&picks), "tree {b:?}");
            for &e in &b {
                assert_eq!(rs.source(d[e]), e);
                let (u, v) = edges[e];
                assert!(u != 0 || v != 0);
            }
        }
        assert_eq!(trees, 16);
        assert!(rs.witness_assignment(&[0, 1, 3]).is_err(), "triangle 0-1-2");
    }

    #[test]
    fn sparse_linear_identity_degenerates_to_partition() {
        let lin = LinearMatroid::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(1)]]).unwrap();
        let m = ConcreteMatroid::Linear(lin);
        let rs = sparse_linear_reduce_and_solve::<i64>(&m, 1, Some(0.5)).unwrap();
        assert_eq!(rs.refined_size(), 2);
        assert_eq!(rs.refinements(1), &[1]);
        let k2 = sparse_linear_reduce_and_solve::<i64>(&m, 2, None).unwrap();
        assert_eq!(k2.p(), 0.5);
        assert!((k2.params().c_o - 0.125).abs() < 1e-12);
    }

    #[test]
    fn sparse_linear_rejects_dense_columns_and_keeps_zero_columns_as_loops() {
        let lin =
            LinearMatroid::from_rows(vec![vec![q(1), q(0)], vec![q(1), q(0)], vec![q(1), q(0)]])
                .unwrap();
        let m = ConcreteMatroid::Linear(lin);
        assert!(sparse_linear_reduce_and_solve::<i64>(&m, 2, None).is_err());
        let rs = sparse_linear_reduce_and_solve::<i64>(&m, 3, None).unwrap();
        let dummy = rs.refinements(1)[0];
        assert!(rs.refined().is_loop(dummy));
    }

    #[test]
    fn covering_assignment_keeps_opt_optimal() {
        // columns (1,-1,0), (0,1,-1), (1,0,-1), (1,0,0); OPT = {0, 1, 3}
        let lin = LinearMatroid::from_rows(vec![
            vec![q(1), q(0), q(1), q(1)],
            vec![q(-1), q(1), q(0), q(0)],
            vec![q(0), q(-1), q(-1), q(0)],
        ])
        .unwrap();
        let rs = sparse_linear_reduce_and_solve::<i64>(&ConcreteMatroid::Linear(lin), 2, Some(0.5)).unwrap();
        let w = [4, 3, 2, 1];
        let plain = rs.witness_assignment(&[0, 1, 3]).unwrap();
        // column 2 on row 0 pushes column 3 out of the restricted optimum
        assert_eq!(rs.source(plain[2]), 2);
        assert_eq!(plain[2], rs.refinements(2)[0]);
        let d = rs.covering_assignment(&[0, 1, 3], &w).unwrap();
        assert_eq!(d[2], rs.refinements(2)[1]);
        let picks: Vec<usize> = [0, 1, 3].iter().map(|&e| d[e]).collect();
        let mut probe = picks.clone();
        probe.push(d[2]);
        assert!(rs.refined().independent(&picks));
        assert!(!rs.refined().independent(&probe));
    }

    #[test]
    fn transversal_refinements_and_matching_witness() {
        let t = TransversalMatroid::new(2, vec![vec![0, 1], vec![0], vec![]]).unwrap();
        let m = ConcreteMatroid::Transversal(t);
        let rs = transversal_reduce_and_solve::<i64>(&m, 0.5).unwrap();
        assert_eq!(rs.refinements(0).len(), 2);
        assert_eq!(rs.refinements(2).len(), 1);
        assert!(rs.refined().is_loop(rs.refinements(2)[0]));
        assert_eq!(rs.params(), RsParams { c_r: 1.0, c_o: 0.25, c_a: 0.0 });
        let d = rs.witness_assignment(&[0, 1]).unwrap();
        assert!(rs.refined().independent(&[d[0], d[1]]));
        assert!(rs.witness_assignment(&[1, 2]).is_err());
    }

    #[test]
    fn assigned_translates_ids() {
        let t = TransversalMatroid::new(2, vec![vec![0, 1], vec![1]]).unwrap();
        let rs = transversal_reduce_and_solve::<i64>(&ConcreteMatroid::Transversal(t), 0.5).unwrap();
        let mut alg = rs.instantiate(vec![1, 2]);
        alg.observe_sample(&[]);
        assert!(alg.offer(0, &3));
        assert!(!alg.offer(1, &5), "both picks sit in right node 1");
        alg.place(0, Placement::Primary);
        assert_eq!(alg.accepted(), vec![0]);
        assert_eq!(alg.refined_accepted(), vec![1]);
    }
}
