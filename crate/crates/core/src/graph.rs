//! Matrix-weighted signed graphs and their block Laplacians.
//!
//! An undirected edge `{i, j}` carries a sign `s ∈ {+, −}` and a symmetric
//! `d × d` magnitude `W`. Its adjacency block is `s·W` and it contributes `W`
//! to the degree of both endpoints, so the Laplacian has diagonal blocks
//! `Σ_j W_ij` and off-diagonal blocks `−s·W_ij`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeSign {
    #[serde(alias = "+")]
    Positive,
    #[serde(alias = "-")]
    Negative,
}

impl EdgeSign {
    pub fn apply<T: Scalar>(self, w: &Mat<T>) -> Mat<T> {
        match self {
            EdgeSign::Positive => w.clone(),
            EdgeSign::Negative => -w,
        }
    }
}

impl fmt::Display for EdgeSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeSign::Positive => "+",
            EdgeSign::Negative => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    NegativeDefinite,
    NegativeSemidefinite,
    Indefinite,
}

impl Definiteness {
    /// Classifies a nonzero symmetric matrix by its principal minors.
    pub fn of<T: Scalar>(w: &Mat<T>) -> Self {
        if leading_minors_positive(w) {
            return Definiteness::PositiveDefinite;
        }
        let neg = -w;
        if leading_minors_positive(&neg) {
            return Definiteness::NegativeDefinite;
        }
        if principal_minors_nonnegative(w) {
            Definiteness::PositiveSemidefinite
        } else if principal_minors_nonnegative(&neg) {
            Definiteness::NegativeSemidefinite
        } else {
            Definiteness::Indefinite
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(
            self,
            Definiteness::PositiveDefinite | Definiteness::PositiveSemidefinite
        )
    }

    pub fn is_negative(self) -> bool {
        matches!(
            self,
            Definiteness::NegativeDefinite | Definiteness::NegativeSemidefinite
        )
    }
}

fn principal_submatrix<T: Scalar>(w: &Mat<T>, idx: &[usize]) -> Mat<T> {
    Mat::from_fn(idx.len(), idx.len(), |r, c| w[(idx[r], idx[c])].clone())
}

fn leading_minors_positive<T: Scalar>(w: &Mat<T>) -> bool {
    (1..=w.rows()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        principal_submatrix(w, &idx).determinant() > T::zero()
    })
}

fn principal_minors_nonnegative<T: Scalar>(w: &Mat<T>) -> bool {
    let d = w.rows();
    (1u32..(1 << d)).all(|mask| {
        let idx: Vec<usize> = (0..d).filter(|&i| mask & (1 << i) != 0).collect();
        principal_submatrix(w, &idx).determinant() >= T::zero()
    })
}

/// Undirected signed edge with `i < j` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEdge<T> {
    pub i: usize,
    pub j: usize,
    pub sign: EdgeSign,
    /// Magnitude `|A_ij|`.
    pub weight: Mat<T>,
    pub definiteness: Definiteness,
}

impl<T: Scalar> WeightedEdge<T> {
    /// Signed adjacency block `s·W`.
    pub fn adjacency(&self) -> Mat<T> {
        self.sign.apply(&self.weight)
    }

    pub fn other(&self, node: usize) -> usize {
        if node == self.i {
            self.j
        } else {
            self.i
        }
    }

    /// Magnitudes that are not positive (semi)definite are accepted but flagged.
    pub fn is_flagged(&self) -> bool {
        !self.definiteness.is_positive()
    }
}

/// Undirected graph on nodes `0..n` with `d × d` symmetric matrix weights
/// and a distinguished set of leader nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixWeightedSignedGraph<T> {
    n: usize,
    d: usize,
    edges: BTreeMap<(usize, usize), WeightedEdge<T>>,
    leaders: Vec<usize>,
}

impl<T: Scalar> MatrixWeightedSignedGraph<T> {
    pub fn new(n: usize, d: usize, leaders: Vec<usize>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::Dimension(format!(
                "node count and state dimension must be positive (n = {n}, d = {d})"
            )));
        }
        validate_leaders(n, &leaders)?;
        Ok(Self {
            n,
            d,
            edges: BTreeMap::new(),
            leaders,
        })
    }

    pub fn add_edge(&mut self, i: usize, j: usize, sign: EdgeSign, weight: Mat<T>) -> Result<()> {
        self.check_node(i)?;
        self.check_node(j)?;
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        let key = (i.min(j), i.max(j));
        if self.edges.contains_key(&key) {
            return Err(Error::DuplicateEdge(key.0, key.1));
        }
        let invalid = |reason: String| Error::InvalidWeight { i, j, reason };
        if weight.shape() != (self.d, self.d) {
            return Err(invalid(format!(
                "weight is {}x{}, expected {}x{}",
                weight.rows(),
                weight.cols(),
                self.d,
                self.d
            )));
        }
        if !weight.is_symmetric() {
            return Err(invalid("weight is not symmetric".into()));
        }
        if weight.is_zero() {
            return Err(invalid("weight is the zero matrix".into()));
        }
        let definiteness = Definiteness::of(&weight);
        self.edges.insert(
            key,
            WeightedEdge {
                i: key.0,
                j: key.1,
                sign,
                weight,
                definiteness,
            },
        );
        Ok(())
    }

    /// Builder form of [`add_edge`](Self::add_edge).
    pub fn with_edge(mut self, i: usize, j: usize, sign: EdgeSign, weight: Mat<T>) -> Result<Self> {
        self.add_edge(i, j, sign, weight)?;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn leaders(&self) -> &[usize] {
        &self.leaders
    }

    pub fn is_leader(&self, node: usize) -> bool {
        self.leaders.contains(&node)
    }

    pub fn edges(&self) -> impl Iterator<Item = &WeightedEdge<T>> {
        self.edges.values()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<&WeightedEdge<T>> {
        self.edges.get(&(i.min(j), i.max(j)))
    }

    /// Edges incident to `node`, paired with the neighbour id.
    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, &WeightedEdge<T>)> {
        self.edges
            .values()
            .filter(move |e| e.i == node || e.j == node)
            .map(move |e| (e.other(node), e))
    }

    /// Edges whose magnitude is not positive (semi)definite.
    pub fn flagged_edges(&self) -> Vec<&WeightedEdge<T>> {
        self.edges.values().filter(|e| e.is_flagged()).collect()
    }

    fn check_node(&self, node: usize) -> Result<()> {
        if node < self.n {
            Ok(())
        } else {
            Err(Error::InvalidNode { node, n: self.n })
        }
    }

    pub fn adjacency_block(&self, i: usize, j: usize) -> Result<Mat<T>> {
        self.check_node(i)?;
        self.check_node(j)?;
        Ok(self
            .edge(i, j)
            .filter(|_| i != j)
            .map_or_else(|| Mat::zeros(self.d, self.d), WeightedEdge::adjacency))
    }

    /// `d_i = Σ_j |A_ij|`.
    pub fn degree(&self, i: usize) -> Result<Mat<T>> {
        self.check_node(i)?;
        let mut deg = Mat::zeros(self.d, self.d);
        for (_, e) in self.neighbors(i) {
            deg = &deg + &e.weight;
        }
        Ok(deg)
    }

    /// `dn × dn` block Laplacian `L = D − A`.
    pub fn laplacian(&self) -> Mat<T> {
        let d = self.d;
        let mut l = Mat::zeros(self.n * d, self.n * d);
        for e in self.edges.values() {
            let adj = e.adjacency();
            let neg = -&adj;
            l.add_block(e.i * d, e.i * d, &e.weight);
            l.add_block(e.j * d, e.j * d, &e.weight);
            l.set_block(e.i * d, e.j * d, &neg);
            l.set_block(e.j * d, e.i * d, &neg);
        }
        l
    }

    /// Same node count, dimension and leader list.
    pub fn is_compatible(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d && self.leaders == other.leaders
    }

    /// Same nodes and leaders, no edges.
    pub fn without_edges(&self) -> Self {
        Self {
            n: self.n,
            d: self.d,
            edges: BTreeMap::new(),
            leaders: self.leaders.clone(),
        }
    }

    /// Union graph: adjacency blocks are summed pairwise.
    ///
    /// Contributions of one sign keep that sign and add magnitudes. Mixed
    /// signs are re-classified from the signed sum: positive semidefinite
    /// sums become positive edges, negative semidefinite sums negative edges,
    /// and indefinite sums positive edges with a flagged magnitude. A zero
    /// sum drops the edge.
    pub fn union_graph(graphs: &[Self]) -> Result<Self> {
        let first = graphs
            .first()
            .ok_or_else(|| Error::Incompatible("union of an empty list".into()))?;
        for (idx, g) in graphs.iter().enumerate().skip(1) {
            if !first.is_compatible(g) {
                return Err(Error::Incompatible(format!(
                    "graph {idx} differs from graph 0 in node count, dimension or leaders"
                )));
            }
        }
        let mut contributions: BTreeMap<(usize, usize), Vec<&WeightedEdge<T>>> = BTreeMap::new();
        for g in graphs {
            for (key, e) in &g.edges {
                contributions.entry(*key).or_default().push(e);
            }
        }
        let mut union = first.without_edges();
        for ((i, j), parts) in contributions {
            let sign = parts[0].sign;
            let (sign, weight) = if parts.iter().all(|e| e.sign == sign) {
                let mut w = Mat::zeros(first.d, first.d);
                for e in &parts {
                    w = &w + &e.weight;
                }
                (sign, w)
            } else {
                let mut s = Mat::zeros(first.d, first.d);
                for e in &parts {
                    s = &s + &e.adjacency();
                }
                if s.is_zero() {
                    continue;
                }
                if Definiteness::of(&s).is_negative() {
                    (EdgeSign::Negative, -&s)
                } else {
                    (EdgeSign::Positive, s)
                }
            };
            if weight.is_zero() {
                continue;
            }
            union.add_edge(i, j, sign, weight)?;
        }
        Ok(union)
    }

    /// Converts every entry to another scalar type.
    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MatrixWeightedSignedGraph<U> {
        MatrixWeightedSignedGraph {
            n: self.n,
            d: self.d,
            edges: self
                .edges
                .iter()
                .map(|(k, e)| {
                    let weight = e.weight.map(&f);
                    (
                        *k,
                        WeightedEdge {
                            i: e.i,
                            j: e.j,
                            sign: e.sign,
                            definiteness: e.definiteness,
                            weight,
                        },
                    )
                })
                .collect(),
            leaders: self.leaders.clone(),
        }
    }
}

fn validate_leaders(n: usize, leaders: &[usize]) -> Result<()> {
    if leaders.is_empty() {
        return Err(Error::InvalidLeaders(
            "at least one leader is required".into(),
        ));
    }
    if leaders.len() > n {
        return Err(Error::InvalidLeaders(format!(
            "{} leaders for {n} nodes",
            leaders.len()
        )));
    }
    for (k, &l) in leaders.iter().enumerate() {
        if l >= n {
            return Err(Error::InvalidLeaders(format!(
                "leader {l} is out of range for {n} nodes"
            )));
        }
        if leaders[..k].contains(&l) {
            return Err(Error::InvalidLeaders(format!("leader {l} is repeated")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = Mat<BigRational>;
    type G = MatrixWeightedSignedGraph<BigRational>;

    fn w12() -> Q {
        Q::from_i64(&[[1, 2], [2, 1]])
    }

    fn w21() -> Q {
        Q::from_i64(&[[2, 1], [1, 2]])
    }

    fn example1() -> G {
        G::new(4, 2, vec![0])
            .unwrap()
            .with_edge(0, 1, EdgeSign::Positive, w12())
            .unwrap()
            .with_edge(0, 2, EdgeSign::Positive, w12())
            .unwrap()
            .with_edge(1, 3, EdgeSign::Negative, w21())
            .unwrap()
            .with_edge(2, 3, EdgeSign::Negative, w21())
            .unwrap()
    }

    #[test]
    fn adjacency_block_examples() {
        let g = example1();
        assert_eq!(g.adjacency_block(1, 2).unwrap(), Q::zeros(2, 2));
        assert_eq!(g.adjacency_block(0, 1).unwrap(), w12());
        assert_eq!(g.adjacency_block(1, 0).unwrap(), w12());
        assert_eq!(g.adjacency_block(1, 3).unwrap(), -&w21());
        assert!(matches!(
            g.adjacency_block(0, 9),
            Err(Error::InvalidNode { node: 9, n: 4 })
        ));
    }

    #[test]
    fn degree_examples() {
        let g = example1();
        assert_eq!(g.degree(0).unwrap(), Q::from_i64(&[[2, 4], [4, 2]]));
        let isolated = G::new(3, 2, vec![0]).unwrap();
        assert_eq!(isolated.degree(2).unwrap(), Q::zeros(2, 2));
        let scalar = G::new(3, 1, vec![0])
            .unwrap()
            .with_edge(0, 1, EdgeSign::Positive, Q::from_i64(&[[1]]))
            .unwrap()
            .with_edge(1, 2, EdgeSign::Positive, Q::from_i64(&[[1]]))
            .unwrap();
        assert_eq!(scalar.degree(1).unwrap(), Q::from_i64(&[[2]]));
    }

    #[test]
    fn laplacian_examples() {
        let empty = G::new(3, 2, vec![0]).unwrap();
        assert_eq!(empty.laplacian(), Q::zeros(6, 6));

        let path = G::new(3, 1, vec![0])
            .unwrap()
            .with_edge(0, 1, EdgeSign::Positive, Q::from_i64(&[[1]]))
            .unwrap()
            .with_edge(1, 2, EdgeSign::Positive, Q::from_i64(&[[1]]))
            .unwrap();
        assert_eq!(
            path.laplacian(),
            Q::from_i64(&[[1, -1, 0], [-1, 2, -1], [0, -1, 1]])
        );

        // single positive edge 1-2 on three nodes
        let l3a = G::new(3, 2, vec![0])
            .unwrap()
            .with_edge(0, 1, EdgeSign::Positive, w12())
            .unwrap()
            .laplacian();
        let z = Q::zeros(2, 2);
        let m = -&w12();
        let expected = Mat::vstack(&[
            &Mat::hstack(&[&w12(), &m, &z]),
            &Mat::hstack(&[&m, &w12(), &z]),
            &Mat::hstack(&[&z, &z, &z]),
        ]);
        assert_eq!(l3a, expected);
    }

    #[test]
    fn negative_edges_flip_off_diagonal_only() {
        let g = example1();
        let l = g.laplacian();
        assert_eq!(l.block(2, 6, 2, 2), w21());
        assert_eq!(l.block(6, 6, 2, 2), &w21() + &w21());
        assert!(l.is_symmetric());
    }

    #[test]
    fn union_examples() {
        let a = G::new(3, 2, vec![0])
            .unwrap()
            .with_edge(0, 1, EdgeSign::Positive, w12())
            .unwrap();
        let b = G::new(3, 2, vec![0])
            .unwrap()
            .with_edge(0, 2, EdgeSign::Positive, w12())
            .unwrap();
        let u = G::union_graph(&[a.clone(), b]).unwrap();
        assert_eq!(u.edge_count(), 2);
        assert_eq!(u.adjacency_block(0, 2).unwrap(), w12());

        assert_eq!(G::union_graph(&[a.clone(), a.without_edges()]).unwrap(), a);

        let doubled = G::union_graph(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(
            doubled.adjacency_block(0, 1).unwrap(),
            w12().scale(&BigRational::from_i64(2))
        );
    }

    #[test]
    fn union_with_cancelling_signs_drops_edge() {
        let pos = G::new(2, 1, vec![0])
            .unwrap()
            .with_edge(0, 1, EdgeSign::Positive, Q::from_i64(&[[3]]))
            .unwrap();
        let neg = G::new(2, 1, vec![0])
            .unwrap()
            .with_edge(0, 1, EdgeSign::Negative, Q::from_i64(&[[3]]))
            .unwrap();
        assert_eq!(
            G::union_graph(&[pos.clone(), neg.clone()])
                .unwrap()
                .edge_count(),
            0
        );

        let neg5 = G::new(2, 1, vec![0])
            .unwrap()
            .with_edge(0, 1, EdgeSign::Negative, Q::from_i64(&[[5]]))
            .unwrap();
        let u = G::union_graph(&[pos, neg5]).unwrap();
        let e = u.edge(0, 1).unwrap();
        assert_eq!(e.sign, EdgeSign::Negative);
        assert_eq!(e.weight, Q::from_i64(&[[2]]));
    }

    #[test]
    fn union_rejects_mismatched_graphs() {
        let a = G::new(3, 2, vec![0]).unwrap();
        let b = G::new(3, 2, vec![1]).unwrap();
        assert!(matches!(
            G::union_graph(&[a, b]),
            Err(Error::Incompatible(_))
        ));
    }

    #[test]
    fn edge_validation() {
        let mut g = G::new(3, 2, vec![0]).unwrap();
        assert!(matches!(
            g.add_edge(1, 1, EdgeSign::Positive, w12()),
            Err(Error::SelfLoop(1))
        ));
        assert!(matches!(
            g.add_edge(0, 1, EdgeSign::Positive, Q::from_i64(&[[1, 2], [3, 1]])),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            g.add_edge(0, 1, EdgeSign::Positive, Q::zeros(2, 2)),
            Err(Error::InvalidWeight { .. })
        ));
        g.add_edge(0, 1, EdgeSign::Positive, w12()).unwrap();
        assert!(matches!(
            g.add_edge(1, 0, EdgeSign::Negative, w21()),
            Err(Error::DuplicateEdge(0, 1))
        ));
    }

    #[test]
    fn leader_validation() {
        assert!(G::new(3, 1, vec![]).is_err());
        assert!(G::new(3, 1, vec![3]).is_err());
        assert!(G::new(3, 1, vec![1, 1]).is_err());
        assert!(G::new(3, 1, vec![0, 1, 2]).is_ok());
    }

    #[test]
    fn definiteness_classification() {
        assert_eq!(Definiteness::of(&w12()), Definiteness::Indefinite);
        assert_eq!(Definiteness::of(&w21()), Definiteness::PositiveDefinite);
        assert_eq!(
            Definiteness::of(&Q::from_i64(&[[1, 1], [1, 1]])),
            Definiteness::PositiveSemidefinite
        );
        assert_eq!(
            Definiteness::of(&Q::from_i64(&[[0, 0], [0, -1]])),
            Definiteness::NegativeSemidefinite
        );
        assert!(example1().flagged_edges().len() == 2);
    }
}
