//! The asymptotic ring of a diagonal H-cell and generic fusion-ring tools:
//! axioms, Frobenius-Perron dimensions, fusion graphs and isomorphism.

use std::fmt::Write as _;

use num_traits::Float;
use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::cells::HBlock;
use crate::coxeter::{CoxeterSystem, ElemId};
use crate::error::{Error, Result};

/// A based ring with nonnegative structure constants, a unit and a duality.
///
/// `N[x][y][z]` is the multiplicity of `z` in `x * y`. For an H-cell this is
/// `gamma_{x,y,z^-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionRing {
    basis: Vec<ElemId>,
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    n: Vec<u32>,
}

impl FusionRing {
    /// Builds a ring from its structure constants and checks the axioms.
    pub fn new(
        basis: Vec<ElemId>,
        labels: Vec<String>,
        unit: usize,
        dual: Vec<usize>,
        n: Vec<u32>,
    ) -> Result<Self> {
        let r = basis.len();
        if labels.len() != r || dual.len() != r || n.len() != r * r * r || unit >= r.max(1) {
            return Err(Error::PropertyViolation("inconsistent fusion ring dimensions".into()));
        }
        let ring = FusionRing { basis, labels, unit, dual, n };
        ring.check_axioms()?;
        Ok(ring)
    }

    /// Builds a ring on `0..rank` from a closure `(x, y, z) -> N_{x,y}^z`.
    pub fn from_fn(
        rank: usize,
        unit: usize,
        dual: Vec<usize>,
        labels: Vec<String>,
        f: impl Fn(usize, usize, usize) -> u32,
    ) -> Result<Self> {
        let mut n = vec![0u32; rank * rank * rank];
        for x in 0..rank {
            for y in 0..rank {
                for z in 0..rank {
                    n[(x * rank + y) * rank + z] = f(x, y, z);
                }
            }
        }
        Self::new((0..rank as ElemId).collect(), labels, unit, dual, n)
    }

    /// The asymptotic ring of a diagonal H-cell: `N_{x,y}^z = gamma_{x,y,z^-1}`.
    pub fn from_h_block(sys: &CoxeterSystem, block: &HBlock) -> Result<Self> {
        let hs = &block.elements;
        let r = hs.len();
        let index = |w: ElemId| hs.iter().position(|&u| u == w);
        let mut n = vec![0u32; r * r * r];
        for (i, &x) in hs.iter().enumerate() {
            for (j, &y) in hs.iter().enumerate() {
                for (k, &z) in hs.iter().enumerate() {
                    let c = block.structure_constant(x, y, z);
                    if c < 0 {
                        return Err(Error::PropertyViolation(format!(
                            "negative gamma at ({}, {}, {})",
                            sys.word_string(x),
                            sys.word_string(y),
                            sys.word_string(z)
                        )));
                    }
                    n[(i * r + j) * r + k] = c as u32;
                }
            }
        }
        let dual = hs
            .iter()
            .map(|&x| {
                index(sys.inverse(x)).ok_or_else(|| {
                    Error::PropertyViolation(format!("H-cell not closed under inverse at {}", sys.word_string(x)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let unit = index(block.duflo)
            .ok_or_else(|| Error::PropertyViolation("Duflo involution outside its H-cell".into()))?;
        let labels = hs.iter().map(|&x| sys.word_string(x)).collect();
        Self::new(hs.clone(), labels, unit, dual, n)
    }

    /// The group ring of `(Z/2)^k`, basis indexed by bit vectors.
    pub fn elementary_abelian(k: u32) -> Self {
        let r = 1usize << k;
        let labels = (0..r).map(|i| format!("{i:0width$b}", width = k.max(1) as usize)).collect();
        Self::from_fn(r, 0, (0..r).collect(), labels, |x, y, z| u32::from(x ^ y == z)).expect("group ring")
    }

    /// The Grothendieck ring of `SO(3)_k`: the integer-spin part of the
    /// Verlinde ring of `su(2)` at level `k`, with Chebyshev truncation.
    pub fn so3(k: u32) -> Self {
        let even: Vec<u32> = (0..=k).filter(|i| i % 2 == 0).collect();
        let r = even.len();
        let labels = even.iter().map(|i| format!("V{i}")).collect();
        Self::from_fn(r, 0, (0..r).collect(), labels, |x, y, z| {
            let (i, j, l) = (even[x], even[y], even[z]);
            let lo = i.abs_diff(j);
            let hi = (i + j).min(2 * k - i - j);
            u32::from(l >= lo && l <= hi && (l - lo) % 2 == 0)
        })
        .expect("SO(3)_k fusion rules")
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ElemId] {
        &self.basis
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, x: usize) -> usize {
        self.dual[x]
    }

    /// `N_{x,y}^z`.
    pub fn n(&self, x: usize, y: usize, z: usize) -> u32 {
        let r = self.rank();
        self.n[(x * r + y) * r + z]
    }

    fn violation(&self, what: &str, t: &[usize]) -> Error {
        let names: Vec<&str> = t.iter().map(|&i| self.labels[i].as_str()).collect();
        Error::PropertyViolation(format!("{what} fails at ({})", names.join(", ")))
    }

    /// Unit law, associativity, duality being an involution and reciprocity
    /// `N_{x,y}^z = N_{x*,z}^y`.
    pub fn check_axioms(&self) -> Result<()> {
        let r = self.rank();
        let d = self.unit;
        for x in 0..r {
            if self.dual[x] >= r || self.dual[self.dual[x]] != x {
                return Err(self.violation("duality", &[x]));
            }
            for z in 0..r {
                let delta = u32::from(x == z);
                if self.n(d, x, z) != delta || self.n(x, d, z) != delta {
                    return Err(self.violation("unit law", &[x, z]));
                }
            }
        }
        if self.dual[d] != d {
            return Err(self.violation("self-dual unit", &[d]));
        }
        for x in 0..r {
            for y in 0..r {
                for z in 0..r {
                    if self.n(x, y, z) != self.n(self.dual[x], z, y) {
                        return Err(self.violation("reciprocity", &[x, y, z]));
                    }
                }
            }
        }
        for x in 0..r {
            for y in 0..r {
                for z in 0..r {
                    for w in 0..r {
                        let l: u64 = (0..r).map(|u| u64::from(self.n(x, y, u)) * u64::from(self.n(u, z, w))).sum();
                        let rr: u64 = (0..r).map(|u| u64::from(self.n(y, z, u)) * u64::from(self.n(x, u, w))).sum();
                        if l != rr {
                            return Err(self.violation("associativity", &[x, y, z, w]));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank();
        (0..r).all(|x| (0..r).all(|y| (0..r).all(|z| self.n(x, y, z) == self.n(y, x, z))))
    }

    /// Left multiplication matrix of `x`: entry `(z, y)` is `N_{x,y}^z`.
    pub fn left_matrix(&self, x: usize) -> Vec<Vec<u32>> {
        let r = self.rank();
        (0..r).map(|z| (0..r).map(|y| self.n(x, y, z)).collect()).collect()
    }

    /// Frobenius-Perron dimensions. The common PF eigenvector of all left
    /// multiplications is found by power iteration on `I + sum_x L_x`; each
    /// dimension is then the eigenvalue of `L_x` on it.
    pub fn pf_dimensions<F: Float>(&self) -> Result<Vec<F>> {
        let r = self.rank();
        let mut a = vec![vec![F::zero(); r]; r];
        for x in 0..r {
            for (y, row) in a.iter_mut().enumerate() {
                for (z, entry) in row.iter_mut().enumerate() {
                    *entry = *entry + F::from(self.n(x, z, y)).unwrap();
                }
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = row[i] + F::one();
        }
        let tol = F::from(1e-15).unwrap();
        let mut v = vec![F::one(); r];
        let mut converged = false;
        for _ in 0..100_000 {
            let mut w: Vec<F> = a.iter().map(|row| row.iter().zip(&v).fold(F::zero(), |s, (&c, &x)| s + c * x)).collect();
            let norm = w.iter().fold(F::zero(), |m, &x| m.max(x));
            for x in &mut w {
                *x = *x / norm;
            }
            let diff = w.iter().zip(&v).fold(F::zero(), |m, (&p, &q)| m.max((p - q).abs()));
            v = w;
            if diff <= tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::PropertyViolation("power iteration did not converge".into()));
        }
        let scale = v[self.unit];
        for x in &mut v {
            *x = *x / scale;
        }
        let vv = v.iter().fold(F::zero(), |s, &x| s + x * x);
        let dims = (0..r)
            .map(|x| {
                let mut num = F::zero();
                for z in 0..r {
                    let lz = (0..r).fold(F::zero(), |s, y| s + F::from(self.n(x, y, z)).unwrap() * v[y]);
                    num = num + lz * v[z];
                }
                num / vv
            })
            .collect();
        Ok(dims)
    }

    /// `sum_x PFdim(x)^2`.
    pub fn total_dimension<F: Float>(&self) -> Result<F> {
        Ok(self.pf_dimensions::<F>()?.into_iter().fold(F::zero(), |s, d| s + d * d))
    }

    /// Largest deviation from `sum_z N_{x,y}^z d_z = d_x d_y`.
    pub fn pf_multiplicativity_defect<F: Float>(&self, dims: &[F]) -> F {
        let r = self.rank();
        let mut worst = F::zero();
        for x in 0..r {
            for y in 0..r {
                let lhs = (0..r).fold(F::zero(), |s, z| s + F::from(self.n(x, y, z)).unwrap() * dims[z]);
                worst = worst.max((lhs - dims[x] * dims[y]).abs());
            }
        }
        worst
    }

    /// The smallest subring containing `x`, as a set of basis indices.
    pub fn generated_by(&self, x: usize) -> Vec<usize> {
        let r = self.rank();
        let mut inside = vec![false; r];
        inside[self.unit] = true;
        inside[x] = true;
        loop {
            let mut grew = false;
            for a in 0..r {
                if !inside[a] {
                    continue;
                }
                for z in 0..r {
                    if !inside[z] && self.n(x, a, z) > 0 {
                        inside[z] = true;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        (0..r).filter(|&i| inside[i]).collect()
    }

    /// Fusion graph of left multiplication by `g`.
    pub fn fusion_graph(&self, g: usize) -> FusionGraph {
        let r = self.rank();
        let mut edges = Vec::new();
        for x in 0..r {
            for y in 0..r {
                let m = self.n(g, x, y);
                if m > 0 {
                    edges.push((x, y, m));
                }
            }
        }
        FusionGraph { labels: self.labels.clone(), unit: self.unit, generator: g, edges }
    }

    /// A basis bijection `p` with `N_{p x, p y}^{p z} = N_{x,y}^z` onto
    /// `other`, if one exists.
    pub fn isomorphism(&self, other: &FusionRing) -> Option<Vec<usize>> {
        let r = self.rank();
        if other.rank() != r {
            return None;
        }
        let sig = |ring: &FusionRing, x: usize| {
            let total: u64 = (0..r).flat_map(|y| (0..r).map(move |z| (y, z))).map(|(y, z)| u64::from(ring.n(x, y, z))).sum();
            let trace: u64 = (0..r).map(|y| u64::from(ring.n(x, y, y))).sum();
            let mut sq: Vec<u32> = (0..r).map(|z| ring.n(x, x, z)).collect();
            sq.sort_unstable();
            (ring.dual[x] == x, x == ring.unit, total, trace, sq)
        };
        let sa: Vec<_> = (0..r).map(|x| sig(self, x)).collect();
        let sb: Vec<_> = (0..r).map(|x| sig(other, x)).collect();
        let mut p = vec![usize::MAX; r];
        let mut used = vec![false; r];
        fn rec<S: PartialEq>(
            a: &FusionRing,
            b: &FusionRing,
            sa: &[S],
            sb: &[S],
            i: usize,
            p: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            let r = a.rank();
            if i == r {
                return true;
            }
            for c in 0..r {
                if used[c] || sa[i] != sb[c] {
                    continue;
                }
                p[i] = c;
                let ok = (0..=i).all(|x| {
                    (0..=i).all(|y| {
                        (0..=i).all(|z| {
                            let touches = x == i || y == i || z == i;
                            !touches || a.n(x, y, z) == b.n(p[x], p[y], p[z])
                        })
                    })
                });
                if ok {
                    used[c] = true;
                    if rec(a, b, sa, sb, i + 1, p, used) {
                        return true;
                    }
                    used[c] = false;
                }
            }
            p[i] = usize::MAX;
            false
        }
        rec(self, other, &sa, &sb, 0, &mut p, &mut used).then_some(p)
    }

    pub fn is_isomorphic(&self, other: &FusionRing) -> bool {
        self.isomorphism(other).is_some()
    }

    /// True when the ring is the group ring of `(Z/2)^k` for some `k`.
    pub fn elementary_abelian_rank(&self) -> Option<u32> {
        let r = self.rank();
        if !r.is_power_of_two() {
            return None;
        }
        let group_like = (0..r).all(|x| {
            (0..r).all(|y| (0..r).map(|z| self.n(x, y, z)).sum::<u32>() == 1)
        });
        let involutive = (0..r).all(|x| self.n(x, x, self.unit) == 1);
        (group_like && involutive && self.is_commutative()).then(|| r.trailing_zeros())
    }

    /// Ring dump: basis ids, unit, duality and nonzero `(x, y, z, N)` triples.
    pub fn to_json(&self) -> serde_json::Value {
        let r = self.rank();
        let mut triples = Vec::new();
        for x in 0..r {
            for y in 0..r {
                for z in 0..r {
                    let c = self.n(x, y, z);
                    if c > 0 {
                        triples.push(serde_json::json!([x, y, z, c]));
                    }
                }
            }
        }
        serde_json::json!({
            "basis": self.basis,
            "labels": self.labels,
            "unit": self.unit,
            "dual": self.dual,
            "structure": triples,
        })
    }
}

/// Directed multigraph with `N_{g,x}^y` edges `x -> y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionGraph {
    pub labels: Vec<String>,
    pub unit: usize,
    pub generator: usize,
    /// `(x, y, multiplicity)`.
    pub edges: Vec<(usize, usize, u32)>,
}

impl FusionGraph {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// True when every edge has a reverse edge of equal multiplicity.
    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(x, y, m)| self.edges.iter().any(|&(a, b, k)| a == y && b == x && k == m))
    }

    /// Undirected degree of each vertex, loops counted once.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &(x, y, _) in &self.edges {
            if x <= y {
                deg[x] += 1;
                if x != y {
                    deg[y] += 1;
                }
            }
        }
        deg
    }

    pub fn to_petgraph(&self) -> DiGraph<bool, u32> {
        let mut g = DiGraph::new();
        let nodes: Vec<_> = (0..self.vertex_count()).map(|i| g.add_node(i == self.unit)).collect();
        for &(x, y, m) in &self.edges {
            g.add_edge(nodes[x], nodes[y], m);
        }
        g
    }

    /// Isomorphism of labelled multigraphs, matching unit vertices.
    pub fn is_isomorphic_to(&self, other: &FusionGraph) -> bool {
        is_isomorphic_matching(&self.to_petgraph(), &other.to_petgraph(), |a, b| a == b, |a, b| a == b)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph fusion {\n");
        for (i, l) in self.labels.iter().enumerate() {
            let shape = if i == self.unit { ", shape=doublecircle" } else { "" };
            let _ = writeln!(s, "  n{i} [label=\"{l}\"{shape}];");
        }
        for &(x, y, m) in &self.edges {
            if m == 1 {
                let _ = writeln!(s, "  n{x} -> n{y};");
            } else {
                let _ = writeln!(s, "  n{x} -> n{y} [label=\"{m}\"];");
            }
        }
        s.push_str("}\n");
        s
    }
}
