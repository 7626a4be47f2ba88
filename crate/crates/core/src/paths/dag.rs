use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational_det;
use crate::error::{param, Result, RmtError};

/// Largest tuple length for the exhaustive disjoint-system enumerator.
pub const MAX_GV_TUPLE: usize = 4;
/// Cap on partial paths explored by [`gv_vertex_disjoint_sum`].
pub const MAX_GV_VISITS: usize = 5_000_000;

/// Finite directed acyclic graph with rational edge weights. Vertices are `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDag {
    n: usize,
    out: Vec<Vec<(usize, BigRational)>>,
    order: Vec<usize>,
}

impl WeightedDag {
    /// Builds the graph and its topological order; a directed cycle is rejected.
    pub fn new(n: usize, edges: Vec<(usize, usize, BigRational)>) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return param(format!("edge ({u}, {v}) refers to a vertex outside 0..{n}"));
            }
            out[u].push((v, w));
            indeg[v] += 1;
        }
        // Kahn's algorithm; leftover vertices sit on a cycle
        let mut stack: Vec<usize> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = stack.pop() {
            order.push(u);
            for &(v, _) in &out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        if order.len() != n {
            return Err(RmtError::Contract("graph contains a directed cycle".into()));
        }
        Ok(Self { n, out, order })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    pub fn successors(&self, v: usize) -> &[(usize, BigRational)] {
        &self.out[v]
    }

    /// Total weight of all paths from `a` to every vertex.
    fn weights_from(&self, a: usize) -> Vec<BigRational> {
        let mut w = vec![BigRational::zero(); self.n];
        w[a] = BigRational::one();
        for &u in &self.order {
            if w[u].is_zero() {
                continue;
            }
            let wu = w[u].clone();
            for (v, e) in &self.out[u] {
                w[*v] += &wu * e;
            }
        }
        w
    }

    fn check_tuple(&self, t: &[usize]) -> Result<()> {
        match t.iter().find(|&&v| v >= self.n) {
            Some(v) => param(format!("vertex {v} outside 0..{}", self.n)),
            None => Ok(()),
        }
    }
}

/// `m(a_i, b_j)`: summed weights of all paths from `a_i` to `b_j`. A vertex
/// reaches itself by the empty path of weight 1.
pub fn gv_path_weights(dag: &WeightedDag, a: &[usize], b: &[usize]) -> Result<Vec<Vec<BigRational>>> {
    dag.check_tuple(a)?;
    dag.check_tuple(b)?;
    Ok(a.iter()
        .map(|&ai| {
            let w = dag.weights_from(ai);
            b.iter().map(|&bj| w[bj].clone()).collect()
        })
        .collect())
}

pub fn gv_determinant(dag: &WeightedDag, a: &[usize], b: &[usize]) -> Result<BigRational> {
    if a.len() != b.len() {
        return param("source and sink tuples differ in length");
    }
    Ok(rational_det(gv_path_weights(dag, a, b)?))
}

struct Enumerator<'a> {
    dag: &'a WeightedDag,
    a: &'a [usize],
    b: &'a [usize],
    used: Vec<bool>,
    visits: usize,
    total: BigRational,
}

impl Enumerator<'_> {
    /// Route walker `i` from its current vertex `v`; `perm[i]` is its sink.
    fn walk(&mut self, i: usize, v: usize, weight: BigRational, perm: &[usize], sign: i32) -> Result<()> {
        self.visits += 1;
        if self.visits > MAX_GV_VISITS {
            return Err(RmtError::Resource(format!("more than {MAX_GV_VISITS} partial paths")));
        }
        if v == self.b[perm[i]] {
            self.start(i + 1, weight.clone(), perm, sign)?;
        }
        for (u, e) in self.dag.successors(v).to_vec() {
            if self.used[u] {
                continue;
            }
            self.used[u] = true;
            self.walk(i, u, &weight * e, perm, sign)?;
            self.used[u] = false;
        }
        Ok(())
    }

    fn start(&mut self, i: usize, weight: BigRational, perm: &[usize], sign: i32) -> Result<()> {
        if i == self.a.len() {
            self.total += if sign > 0 { weight } else { -weight };
            return Ok(());
        }
        let v = self.a[i];
        if self.used[v] {
            return Ok(());
        }
        self.used[v] = true;
        let r = self.walk(i, v, weight, perm, sign);
        self.used[v] = false;
        r
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, sign: i32, out: &mut Vec<(Vec<usize>, i32)>) {
        if k == p.len() {
            out.push((p.clone(), sign));
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, if i == k { sign } else { -sign }, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, 1, &mut out);
    out
}

/// `sum sgn(sigma) prod m(P_i)` over systems of pairwise vertex-disjoint paths
/// `P_i : a_i -> b_{sigma(i)}`, by exhaustive search.
pub fn gv_vertex_disjoint_sum(dag: &WeightedDag, a: &[usize], b: &[usize]) -> Result<BigRational> {
    dag.check_tuple(a)?;
    dag.check_tuple(b)?;
    if a.len() != b.len() {
        return param("source and sink tuples differ in length");
    }
    if a.len() > MAX_GV_TUPLE {
        return Err(RmtError::Resource(format!("tuples longer than {MAX_GV_TUPLE} are not enumerated")));
    }
    let mut en = Enumerator { dag, a, b, used: vec![false; dag.n], visits: 0, total: BigRational::zero() };
    for (perm, sign) in permutations(a.len()) {
        en.start(0, BigRational::one(), &perm, sign)?;
    }
    Ok(en.total)
}

/// The up/right lattice whose paths between diagonal points are Dyck paths.
/// Vertex `(r, c)` with `0 <= c <= r <= 2n`; sources `a_i = (n-i, n-i)` and sinks
/// `b_j = (n+j, n+j)` for `i, j = 0..=n`, so `m(a_i, b_j) = C_{i+j}`.
#[derive(Debug, Clone)]
pub struct CatalanLattice {
    pub dag: WeightedDag,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

pub fn catalan_lattice(n: usize) -> Result<CatalanLattice> {
    let side = 2 * n + 1;
    let id = |r: usize, c: usize| r * (r + 1) / 2 + c;
    let count = side * (side + 1) / 2;
    let mut edges = Vec::new();
    for r in 0..side {
        for c in 0..=r {
            if r + 1 < side {
                edges.push((id(r, c), id(r + 1, c), BigRational::one()));
            }
            if c + 1 <= r {
                edges.push((id(r, c), id(r, c + 1), BigRational::one()));
            }
        }
    }
    let dag = WeightedDag::new(count, edges)?;
    let sources = (0..=n).map(|i| id(n - i, n - i)).collect();
    let sinks = (0..=n).map(|j| id(n + j, n + j)).collect();
    Ok(CatalanLattice { dag, sources, sinks })
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `det (C_{i+j})_{i,j=0..n}`.
pub fn catalan_hankel_det(n: usize) -> BigInt {
    let c = crate::combinatorics::catalan_by_recursion(2 * n);
    let m = (0..=n).map(|i| (0..=n).map(|j| BigInt::from(c[i + j].clone())).collect()).collect();
    bareiss_det(m)
}
