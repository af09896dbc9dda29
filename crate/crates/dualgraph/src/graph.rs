//! Weighted dual graphs of configurations of smooth rational curves:
//! intersection matrices, contractibility, pullbacks, discrepancies and
//! iterated blow-down.
//!
//! Vertices carry the self-intersection on the resolution and a `marked`
//! flag for the curves that are not contracted; edges are transverse
//! intersections. Graphs are immutable after construction.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::linalg;
use crate::exact::{gcd, rat, rat_int, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    /// Self-intersection of the curve on the resolution.
    pub weight: i64,
    pub marked: bool,
}

impl Vertex {
    pub fn new(id: impl Into<String>, weight: i64, marked: bool) -> Self {
        Vertex {
            id: id.into(),
            weight,
            marked,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDualGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    glue: Option<(usize, usize)>,
}

impl WeightedDualGraph {
    /// Builds a simple graph; edges are unordered index pairs.
    pub fn build(
        vertices: Vec<Vertex>,
        edges: Vec<(usize, usize)>,
        glue: Option<(usize, usize)>,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if let Some(_prev) = seen.insert(v.id.clone(), i) {
                return Err(Error::Graph(format!("duplicate vertex id `{}`", v.id)));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::Graph(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::Graph(format!(
                    "loop at vertex `{}`",
                    vertices[u].id
                )));
            }
            let e = (u.min(v), u.max(v));
            if normalized.contains(&e) {
                return Err(Error::Graph(format!(
                    "multi-edge between `{}` and `{}`",
                    vertices[e.0].id, vertices[e.1].id
                )));
            }
            normalized.push(e);
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        if let Some((g0, g1)) = glue {
            if g0 >= n || g1 >= n || g0 == g1 {
                return Err(Error::Graph("glue pair out of range".into()));
            }
            if !vertices[g0].marked || !vertices[g1].marked {
                return Err(Error::Graph(
                    "glue must identify two marked curves".into(),
                ));
            }
        }
        Ok(WeightedDualGraph {
            vertices,
            edges: normalized,
            adjacency,
            glue,
        })
    }

    /// A path of unmarked curves with the given self-intersections,
    /// ids `E1, E2, ...`.
    pub fn chain(weights: &[i64]) -> Self {
        let vertices = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| Vertex::new(format!("E{}", i + 1), w, false))
            .collect();
        let edges = (1..weights.len()).map(|i| (i - 1, i)).collect();
        WeightedDualGraph::build(vertices, edges, None).expect("path is simple")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn glue(&self) -> Option<(usize, usize)> {
        self.glue
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn marked_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.vertices[i].marked).collect()
    }

    pub fn exceptional_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.vertices[i].marked).collect()
    }

    /// Intersection matrix of the induced configuration: diagonal entries
    /// are self-intersections, off-diagonal entries 1 per edge.
    pub fn intersection_matrix(&self, subset: &[usize]) -> Vec<Vec<i64>> {
        let k = subset.len();
        let mut m = vec![vec![0i64; k]; k];
        for (r, &u) in subset.iter().enumerate() {
            m[r][r] = self.vertices[u].weight;
            for (c, &v) in subset.iter().enumerate() {
                if r != c && self.are_adjacent(u, v) {
                    m[r][c] = 1;
                }
            }
        }
        m
    }

    /// Artin contractibility of the configuration: the intersection form
    /// is negative definite, checked per connected component by exact
    /// leading-principal-minor signs.
    pub fn is_contractible(&self, subset: &[usize]) -> bool {
        self.induced_components(subset)
            .iter()
            .all(|comp| linalg::is_negative_definite(&self.intersection_matrix(comp)))
    }

    /// Connected components of the induced subgraph, each sorted by index.
    pub fn induced_components(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let in_subset: Vec<bool> = {
            let mut flags = vec![false; self.len()];
            for &v in subset {
                flags[v] = true;
            }
            flags
        };
        let mut seen = vec![false; self.len()];
        let mut components = Vec::new();
        for &start in subset {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adjacency[v] {
                    if in_subset[w] && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// Coefficients gamma making `C' + sum gamma_i E_i` orthogonal to every
    /// curve of `exceptional`, in subset order.
    pub fn pullback_coeffs(&self, exceptional: &[usize], curve: usize) -> Result<Vec<Rat>> {
        if exceptional.contains(&curve) {
            return Err(Error::Graph(
                "pullback curve must not lie in the exceptional set".into(),
            ));
        }
        if exceptional.is_empty() {
            return Ok(Vec::new());
        }
        let m = self.rational_matrix(exceptional);
        let rhs: Vec<Rat> = exceptional
            .iter()
            .map(|&e| {
                if self.are_adjacent(e, curve) {
                    rat_int(-1)
                } else {
                    rat_int(0)
                }
            })
            .collect();
        linalg::solve(m, rhs).ok_or(Error::SingularSystem)
    }

    /// Discrepancies beta with `K_U = g^* K_Z + sum beta_i E_i`, solving
    /// `sum_i beta_i (E_i . E_j) = -2 - E_j^2` for rational curves.
    pub fn discrepancies(&self, exceptional: &[usize]) -> Result<Vec<Rat>> {
        if exceptional.is_empty() {
            return Ok(Vec::new());
        }
        let m = self.rational_matrix(exceptional);
        let rhs: Vec<Rat> = exceptional
            .iter()
            .map(|&e| rat_int(-2 - self.vertices[e].weight))
            .collect();
        linalg::solve(m, rhs).ok_or(Error::SingularSystem)
    }

    fn rational_matrix(&self, subset: &[usize]) -> Vec<Vec<Rat>> {
        self.intersection_matrix(subset)
            .into_iter()
            .map(|row| row.into_iter().map(rat_int).collect())
            .collect()
    }

    /// Repeatedly contracts (-1)-curves of degree at most 2 inside the
    /// induced subgraph, raising each neighbor's self-intersection by one
    /// and joining the two neighbors, until none remains.
    pub fn blow_down_to_minimal(&self, subset: &[usize]) -> Result<WeightedDualGraph> {
        let mut verts: Vec<Vertex> = subset.iter().map(|&i| self.vertices[i].clone()).collect();
        let index_in_subset: HashMap<usize, usize> = subset
            .iter()
            .enumerate()
            .map(|(pos, &i)| (i, pos))
            .collect();
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter_map(|&(u, v)| {
                Some((
                    *index_in_subset.get(&u)?,
                    *index_in_subset.get(&v)?,
                ))
            })
            .collect();
        loop {
            let degree = |edges: &[(usize, usize)], v: usize| {
                edges.iter().filter(|&&(a, b)| a == v || b == v).count()
            };
            let minus_ones: Vec<usize> = (0..verts.len())
                .filter(|&v| verts[v].weight == -1)
                .collect();
            if minus_ones.is_empty() {
                break;
            }
            let Some(&v) = minus_ones.iter().find(|&&v| degree(&edges, v) <= 2) else {
                let v = minus_ones[0];
                return Err(Error::BlowDown(verts[v].id.clone(), degree(&edges, v)));
            };
            let nbrs: Vec<usize> = edges
                .iter()
                .filter_map(|&(a, b)| {
                    if a == v {
                        Some(b)
                    } else if b == v {
                        Some(a)
                    } else {
                        None
                    }
                })
                .collect();
            for &w in &nbrs {
                verts[w].weight += 1;
            }
            edges.retain(|&(a, b)| a != v && b != v);
            if let [w1, w2] = nbrs[..] {
                let joined = (w1.min(w2), w1.max(w2));
                if edges.contains(&joined) {
                    return Err(Error::BlowDown(verts[v].id.clone(), 2));
                }
                edges.push(joined);
            }
            verts.remove(v);
            for (a, b) in &mut edges {
                if *a > v {
                    *a -= 1;
                }
                if *b > v {
                    *b -= 1;
                }
            }
        }
        WeightedDualGraph::build(verts, edges, None)
    }

    /// True when the graph is a single chain of (-2)-curves (the minimal
    /// resolution of an A_n point) or empty; used to read off the DuVal
    /// type of a blow-down residue.
    pub fn is_all_minus_two_chain(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        self.vertices.iter().all(|v| v.weight == -2)
            && self.edges.len() == self.len() - 1
            && (0..self.len()).all(|v| self.neighbors(v).len() <= 2)
            && self.induced_components(&(0..self.len()).collect::<Vec<_>>()).len() == 1
    }
}

/// Index in an A_n germ of a line whose strict transform meets the k-th
/// exceptional curve: `(n+1)/gcd(k, n+1)`.
pub fn line_index(n: u64, k: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "line_index order",
            value: n,
        });
    }
    if k == 0 || k > n {
        return Err(Error::OutOfRange {
            what: "line_index position",
            value: k,
        });
    }
    Ok((n + 1) / gcd(k, n + 1))
}

/// Intersection on the contracted A_n germ of the central curve with a
/// curve meeting the k-th exceptional: `k/(n+1)`.
pub fn curve_dot_gamma(n: u64, k: u64) -> Result<Rat> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::OutOfRange {
            what: "curve_dot_gamma position",
            value: k,
        });
    }
    Ok(rat(k as i64, (n + 1) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> WeightedDualGraph {
        let vertices = vec![
            Vertex::new("E1", -3, false),
            Vertex::new("E2", -2, false),
            Vertex::new("E3", -3, false),
            Vertex::new("C", -1, true),
        ];
        WeightedDualGraph::build(vertices, vec![(0, 1), (1, 2), (1, 3)], None).unwrap()
    }

    #[test]
    fn matrices_of_small_configurations() {
        let chain = WeightedDualGraph::chain(&[-2, -2]);
        assert_eq!(
            chain.intersection_matrix(&[0, 1]),
            vec![vec![-2, 1], vec![1, -2]]
        );
        let g = example1();
        assert_eq!(
            g.intersection_matrix(&[0, 1, 2]),
            vec![vec![-3, 1, 0], vec![1, -2, 1], vec![0, 1, -3]]
        );
        let single = WeightedDualGraph::chain(&[-1]);
        assert_eq!(single.intersection_matrix(&[0]), vec![vec![-1]]);
    }

    #[test]
    fn contractibility() {
        let g = example1();
        assert!(g.is_contractible(&[0, 1, 2]));
        assert!(g.is_contractible(&[0, 1, 2, 3]));
        let single = WeightedDualGraph::chain(&[-1]);
        assert!(single.is_contractible(&[0]));

        // C1(-1) + m x (-2) + C2(-1): total cycle squares to zero
        for m in 1..=8 {
            let mut weights = vec![-1];
            weights.extend(std::iter::repeat_n(-2, m));
            weights.push(-1);
            let g = WeightedDualGraph::chain(&weights);
            let all: Vec<usize> = (0..g.len()).collect();
            assert!(!g.is_contractible(&all));
        }
    }

    #[test]
    fn contractibility_is_monotone() {
        let g = WeightedDualGraph::chain(&[-2, -1, -3, -2, -2]);
        let all: Vec<usize> = (0..g.len()).collect();
        for mask in 0u32..32 {
            let subset: Vec<usize> = all.iter().copied().filter(|&i| mask & (1 << i) != 0).collect();
            if g.is_contractible(&subset) {
                continue;
            }
            // a non-contractible set stays non-contractible in any superset
            for mask2 in 0u32..32 {
                if mask2 & mask == mask {
                    let sup: Vec<usize> =
                        all.iter().copied().filter(|&i| mask2 & (1 << i) != 0).collect();
                    assert!(!g.is_contractible(&sup));
                }
            }
        }
    }

    #[test]
    fn pullback_and_discrepancies_example1() {
        let g = example1();
        let gamma = g.pullback_coeffs(&[0, 1, 2], 3).unwrap();
        assert_eq!(gamma, vec![rat(1, 4), rat(3, 4), rat(1, 4)]);
        let beta = g.discrepancies(&[0, 1, 2]).unwrap();
        assert_eq!(beta, vec![rat(-1, 2), rat(-1, 2), rat(-1, 2)]);
    }

    #[test]
    fn discrepancies_vanish_on_duval() {
        let g = WeightedDualGraph::chain(&[-2, -2, -2]);
        let beta = g.discrepancies(&[0, 1, 2]).unwrap();
        assert!(beta.iter().all(|b| b == &rat_int(0)));
        let g = WeightedDualGraph::chain(&[-3]);
        assert_eq!(g.discrepancies(&[0]).unwrap(), vec![rat(-1, 3)]);
    }

    #[test]
    fn pullback_of_disjoint_curve_is_zero() {
        let vertices = vec![
            Vertex::new("E1", -2, false),
            Vertex::new("E2", -2, false),
            Vertex::new("C", -1, true),
        ];
        let g = WeightedDualGraph::build(vertices, vec![(0, 1)], None).unwrap();
        let gamma = g.pullback_coeffs(&[0, 1], 2).unwrap();
        assert_eq!(gamma, vec![rat_int(0), rat_int(0)]);
    }

    #[test]
    fn singular_system_is_reported() {
        let g = WeightedDualGraph::chain(&[-2, -2, -1]);
        // the cycle-like degenerate form: use a non-negative-definite subset
        let vertices = vec![
            Vertex::new("E1", -2, false),
            Vertex::new("E2", 2, false),
            Vertex::new("C", -1, true),
        ];
        let bad = WeightedDualGraph::build(vertices, vec![(0, 1), (1, 2)], None).unwrap();
        // [-2 1; 1 2] is invertible, so build a genuinely singular one
        let vertices = vec![
            Vertex::new("E1", -1, false),
            Vertex::new("E2", -1, false),
            Vertex::new("C", -1, true),
        ];
        let sing = WeightedDualGraph::build(vertices, vec![(0, 1), (1, 2)], None).unwrap();
        assert!(matches!(
            sing.pullback_coeffs(&[0, 1], 2),
            Err(Error::SingularSystem)
        ));
        let _ = (g, bad);
    }

    #[test]
    fn blow_down_example1_to_a2() {
        let g = example1();
        let all: Vec<usize> = (0..4).collect();
        let down = g.blow_down_to_minimal(&all).unwrap();
        assert_eq!(down.len(), 2);
        assert!(down.is_all_minus_two_chain());
    }

    #[test]
    fn blow_down_single_point() {
        let g = WeightedDualGraph::chain(&[-1]);
        let down = g.blow_down_to_minimal(&[0]).unwrap();
        assert!(down.is_empty());
    }

    #[test]
    fn blow_down_rejects_branching_minus_one() {
        let vertices = vec![
            Vertex::new("A", -2, false),
            Vertex::new("B", -2, false),
            Vertex::new("D", -2, false),
            Vertex::new("E", -1, false),
        ];
        let g =
            WeightedDualGraph::build(vertices, vec![(0, 3), (1, 3), (2, 3)], None).unwrap();
        assert!(matches!(
            g.blow_down_to_minimal(&[0, 1, 2, 3]),
            Err(Error::BlowDown(_, 3))
        ));
    }

    #[test]
    fn line_index_formula() {
        assert_eq!(line_index(2, 1).unwrap(), 3);
        assert_eq!(line_index(3, 2).unwrap(), 2);
        assert_eq!(line_index(1, 1).unwrap(), 2);
        assert!(line_index(3, 4).is_err());
        assert!(line_index(3, 0).is_err());
    }

    #[test]
    fn curve_dot_gamma_formula() {
        assert_eq!(curve_dot_gamma(4, 2).unwrap(), rat(2, 5));
        assert_eq!(curve_dot_gamma(1, 1).unwrap(), rat(1, 2));
        assert_eq!(curve_dot_gamma(5, 5).unwrap(), rat(5, 6));
        assert!(curve_dot_gamma(5, 6).is_err());
    }

    #[test]
    fn rejects_malformed_graphs() {
        let dup = vec![
            Vertex::new("X", -2, false),
            Vertex::new("X", -2, false),
        ];
        assert!(WeightedDualGraph::build(dup, vec![], None).is_err());
        let v = vec![Vertex::new("X", -2, false), Vertex::new("Y", -2, false)];
        assert!(WeightedDualGraph::build(v.clone(), vec![(0, 0)], None).is_err());
        assert!(WeightedDualGraph::build(v.clone(), vec![(0, 1), (1, 0)], None).is_err());
        assert!(WeightedDualGraph::build(v, vec![], Some((0, 1))).is_err());
    }
}
