//! Analysis of a germ: the contraction data extracted from a weighted
//! dual graph whose unmarked curves are contracted.
//!
//! Removing the marked curves splits the exceptional set into maximal
//! chains; each chain contracts to one cyclic quotient point. A chain is
//! read walking away from the marked curve attached to its end, so a
//! chain attached at both ends carries the two inverse readings.

use crate::error::{Error, Result};
use crate::exact::hj::{hj_recognize, HjChain};
use crate::exact::{rat_int, Rat};
use crate::graph::WeightedDualGraph;
use crate::quotient::CyclicQuotient;

/// Where a marked curve meets a singular point's chain.
#[derive(Debug, Clone)]
pub struct Attachment {
    /// Index of the marked curve in the parent graph.
    pub marked: usize,
    /// 1-based position of the met vertex along the oriented chain.
    pub position: usize,
    /// The quotient read walking away from this curve, when it meets a
    /// chain end; interior meetings have no such reading.
    pub reading: Option<CyclicQuotient>,
}

/// One singular point of the contracted surface.
#[derive(Debug, Clone)]
pub struct SingularPoint {
    /// Chain vertices in the orientation used for `quotient`.
    pub chain: Vec<usize>,
    pub quotient: CyclicQuotient,
    pub attachments: Vec<Attachment>,
}

impl SingularPoint {
    /// Attachment of the given marked curve, if any.
    pub fn attachment_of(&self, marked: usize) -> Option<&Attachment> {
        self.attachments.iter().find(|a| a.marked == marked)
    }
}

/// Exact contraction data of a germ.
#[derive(Debug, Clone)]
pub struct GermAnalysis {
    pub graph: WeightedDualGraph,
    /// Indices of the marked (non-contracted) curves.
    pub marked: Vec<usize>,
    /// Indices of the exceptional curves, in graph order.
    pub exceptional: Vec<usize>,
    pub points: Vec<SingularPoint>,
    /// Discrepancies, aligned with `exceptional`.
    pub discrepancies: Vec<Rat>,
    /// Pullback coefficient vectors, `pullbacks[m][e]` for marked `m`.
    pub pullbacks: Vec<Vec<Rat>>,
    /// K_Z . C per marked curve.
    pub kz_dot: Vec<Rat>,
    /// C^2 on the contracted surface per marked curve.
    pub self_int: Vec<Rat>,
    /// Pairwise intersections on the contracted surface, indexed like
    /// `marked`; the diagonal repeats `self_int`.
    pub cross_int: Vec<Vec<Rat>>,
    /// Positions within `marked` of the glued pair, if any.
    pub glue: Option<(usize, usize)>,
}

impl GermAnalysis {
    /// Position of a graph vertex inside the `marked` list.
    pub fn marked_slot(&self, vertex: usize) -> Option<usize> {
        self.marked.iter().position(|&m| m == vertex)
    }

    /// Singular points other than DuVal ones.
    pub fn high_index_points(&self) -> Vec<&SingularPoint> {
        self.points
            .iter()
            .filter(|p| p.quotient.is_duval().is_none())
            .collect()
    }

    pub fn duval_points(&self) -> Vec<&SingularPoint> {
        self.points
            .iter()
            .filter(|p| p.quotient.is_duval().is_some())
            .collect()
    }
}

/// Runs the full intersection-theoretic analysis of a germ.
pub fn analyze_germ(graph: &WeightedDualGraph) -> Result<GermAnalysis> {
    let marked = graph.marked_indices();
    if marked.is_empty() {
        return Err(Error::NoMarkedCurve);
    }
    let exceptional = graph.exceptional_indices();
    for &e in &exceptional {
        let v = graph.vertex(e);
        if v.weight >= -1 {
            return Err(Error::NotMinimal {
                id: v.id.clone(),
                weight: v.weight,
            });
        }
    }
    if !graph.is_contractible(&exceptional) {
        return Err(Error::NotContractible);
    }

    let points = recognize_points(graph, &marked, &exceptional)?;

    let discrepancies = graph.discrepancies(&exceptional)?;
    let mut pullbacks = Vec::with_capacity(marked.len());
    for &c in &marked {
        pullbacks.push(graph.pullback_coeffs(&exceptional, c)?);
    }

    // K_Z . C = K_U . C' - sum beta_j (E_j . C'), with K_U . C' = -2 - C'^2
    let mut kz_dot = Vec::with_capacity(marked.len());
    for &c in &marked {
        let mut acc = rat_int(-2 - graph.vertex(c).weight);
        for (j, &e) in exceptional.iter().enumerate() {
            if graph.are_adjacent(e, c) {
                acc -= &discrepancies[j];
            }
        }
        kz_dot.push(acc);
    }

    // C . D on Z equals D' . g^*C = D'.C' + sum gamma^C_j (E_j . D')
    let mut cross_int = vec![vec![rat_int(0); marked.len()]; marked.len()];
    for (ci, &c) in marked.iter().enumerate() {
        for (di, &d) in marked.iter().enumerate() {
            let mut acc = if c == d {
                rat_int(graph.vertex(c).weight)
            } else if graph.are_adjacent(c, d) {
                rat_int(1)
            } else {
                rat_int(0)
            };
            for (j, &e) in exceptional.iter().enumerate() {
                if graph.are_adjacent(e, d) {
                    acc += &pullbacks[ci][j];
                }
            }
            cross_int[ci][di] = acc;
        }
    }
    let self_int: Vec<Rat> = (0..marked.len()).map(|i| cross_int[i][i].clone()).collect();

    let glue = match graph.glue() {
        Some((u, v)) => {
            let su = marked.iter().position(|&m| m == u);
            let sv = marked.iter().position(|&m| m == v);
            match (su, sv) {
                (Some(a), Some(b)) => Some((a, b)),
                _ => return Err(Error::Graph("glue names unmarked curves".into())),
            }
        }
        None => None,
    };

    Ok(GermAnalysis {
        graph: graph.clone(),
        marked,
        exceptional,
        points,
        discrepancies,
        pullbacks,
        kz_dot,
        self_int,
        cross_int,
        glue,
    })
}

fn recognize_points(
    graph: &WeightedDualGraph,
    marked: &[usize],
    exceptional: &[usize],
) -> Result<Vec<SingularPoint>> {
    let mut points = Vec::new();
    for comp in graph.induced_components(exceptional) {
        let path = order_as_path(graph, &comp)?;

        for &c in marked {
            let meetings = path.iter().filter(|&&v| graph.are_adjacent(v, c)).count();
            if meetings > 2 {
                return Err(Error::TooManyMeetings {
                    curve: graph.vertex(c).id.clone(),
                    count: meetings,
                });
            }
        }

        let path = orient(graph, marked, path);
        let chain_entries: Vec<u64> = path
            .iter()
            .map(|&v| (-graph.vertex(v).weight) as u64)
            .collect();
        let chain = HjChain::new(chain_entries)?;
        let (n, a) = hj_recognize(&chain)?;
        let quotient = CyclicQuotient::new(n, a)?;

        let mut attachments = Vec::new();
        for &c in marked {
            for (pos0, &v) in path.iter().enumerate() {
                if !graph.are_adjacent(v, c) {
                    continue;
                }
                let reading = if pos0 == 0 {
                    Some(quotient)
                } else if pos0 == path.len() - 1 {
                    Some(CyclicQuotient::from_chain(&chain.reversed())?)
                } else {
                    None
                };
                attachments.push(Attachment {
                    marked: c,
                    position: pos0 + 1,
                    reading,
                });
            }
        }

        points.push(SingularPoint {
            chain: path,
            quotient,
            attachments,
        });
    }
    points.sort_by_key(|p| p.chain.iter().copied().min());
    Ok(points)
}

/// Orders a connected component as a path, rejecting branch vertices.
fn order_as_path(graph: &WeightedDualGraph, comp: &[usize]) -> Result<Vec<usize>> {
    let degree = |v: usize| {
        graph
            .neighbors(v)
            .iter()
            .filter(|w| comp.contains(w))
            .count()
    };
    for &v in comp {
        let d = degree(v);
        if d >= 3 {
            return Err(Error::BranchVertex(graph.vertex(v).id.clone(), d));
        }
    }
    if comp.len() == 1 {
        return Ok(comp.to_vec());
    }
    let Some(&start) = comp.iter().find(|&&v| degree(v) == 1) else {
        // all degrees 2: a cycle; its intersection form is never negative
        // definite, so contractibility screens this out first
        return Err(Error::Graph("exceptional component is a cycle".into()));
    };
    let mut path = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while path.len() < comp.len() {
        let next = graph
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&w| comp.contains(&w) && w != prev)
            .expect("path continues");
        path.push(next);
        prev = cur;
        cur = next;
    }
    Ok(path)
}

/// Fixes the reading direction of a chain: start at an end met by a
/// marked curve (the lowest-indexed one when both ends are met);
/// otherwise start at the lower vertex index.
fn orient(graph: &WeightedDualGraph, marked: &[usize], mut path: Vec<usize>) -> Vec<usize> {
    if path.len() < 2 {
        return path;
    }
    let met_by = |v: usize| {
        marked
            .iter()
            .copied()
            .filter(|&c| graph.are_adjacent(v, c))
            .min()
    };
    let first = met_by(path[0]);
    let last = met_by(path[path.len() - 1]);
    let reverse = match (first, last) {
        (None, Some(_)) => true,
        (Some(a), Some(b)) => b < a,
        _ => path[path.len() - 1] < path[0],
    };
    if reverse {
        path.reverse();
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::graph::Vertex;

    fn semistable_example() -> WeightedDualGraph {
        let vertices = vec![
            Vertex::new("A1", -3, false),
            Vertex::new("A2", -2, false),
            Vertex::new("A3", -3, false),
            Vertex::new("C", -1, true),
            Vertex::new("B1", -2, false),
            Vertex::new("B2", -5, false),
        ];
        WeightedDualGraph::build(
            vertices,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
            None,
        )
        .unwrap()
    }

    #[test]
    fn semistable_germ_numbers() {
        let analysis = analyze_germ(&semistable_example()).unwrap();
        assert_eq!(analysis.marked, vec![3]);
        let quotients: Vec<String> = analysis
            .points
            .iter()
            .map(|p| p.quotient.to_string())
            .collect();
        assert_eq!(quotients, vec!["1/12(1,5)", "1/9(1,5)"]);
        assert_eq!(analysis.kz_dot[0], rat(-1, 6));
        assert_eq!(analysis.self_int[0], rat(-1, 36));
    }

    #[test]
    fn readings_walk_away_from_the_curve() {
        // -2 -4 | C(-4 marked) adjacent to the -4 end reads 1/7(1,2)
        let vertices = vec![
            Vertex::new("E1", -2, false),
            Vertex::new("E2", -4, false),
            Vertex::new("C1", -4, true),
            Vertex::new("C2", -1, true),
            Vertex::new("F1", -2, false),
            Vertex::new("F2", -2, false),
            Vertex::new("F3", -3, false),
        ];
        let g = WeightedDualGraph::build(
            vertices,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)],
            Some((2, 3)),
        )
        .unwrap();
        let analysis = analyze_germ(&g).unwrap();
        let p1 = analysis
            .points
            .iter()
            .find(|p| p.attachment_of(2).is_some())
            .unwrap();
        assert_eq!(
            p1.attachment_of(2).unwrap().reading.unwrap().to_string(),
            "1/7(1,2)"
        );
        let p2 = analysis
            .points
            .iter()
            .find(|p| p.attachment_of(3).is_some())
            .unwrap();
        assert_eq!(
            p2.attachment_of(3).unwrap().reading.unwrap().to_string(),
            "1/7(1,5)"
        );
    }

    #[test]
    fn orthogonality_and_projection_formula() {
        let g = semistable_example();
        let analysis = analyze_germ(&g).unwrap();
        // (C' + sum gamma_i E_i) . E_j = 0 for every exceptional j
        for (j, &e) in analysis.exceptional.iter().enumerate() {
            let mut acc = if g.are_adjacent(e, 3) { rat_int(1) } else { rat_int(0) };
            let m = g.intersection_matrix(&analysis.exceptional);
            for (i, _) in analysis.exceptional.iter().enumerate() {
                acc += &analysis.pullbacks[0][i] * rat_int(m[i][j]);
            }
            assert_eq!(acc, rat_int(0), "orthogonality at column {j}");
        }
    }

    #[test]
    fn branch_vertices_are_rejected() {
        let vertices = vec![
            Vertex::new("E1", -2, false),
            Vertex::new("E2", -2, false),
            Vertex::new("E3", -2, false),
            Vertex::new("E4", -5, false),
            Vertex::new("C", -1, true),
        ];
        let g = WeightedDualGraph::build(
            vertices,
            vec![(0, 3), (1, 3), (2, 3), (3, 4)],
            None,
        )
        .unwrap();
        assert!(matches!(
            analyze_germ(&g),
            Err(Error::BranchVertex(_, 3))
        ));
    }

    #[test]
    fn non_contractible_is_rejected() {
        // triangle of (-2)-curves has determinant zero
        let g = WeightedDualGraph::build(
            vec![
                Vertex::new("E1", -2, false),
                Vertex::new("E2", -2, false),
                Vertex::new("E3", -2, false),
                Vertex::new("C", -1, true),
            ],
            vec![(0, 1), (1, 2), (0, 2), (2, 3)],
            None,
        )
        .unwrap();
        assert!(matches!(analyze_germ(&g), Err(Error::NotContractible)));
    }

    #[test]
    fn non_minimal_exceptional_curve_is_rejected() {
        let bad = WeightedDualGraph::build(
            vec![
                Vertex::new("E1", -1, false),
                Vertex::new("C", -1, true),
            ],
            vec![(0, 1)],
            None,
        )
        .unwrap();
        assert!(matches!(analyze_germ(&bad), Err(Error::NotMinimal { .. })));
    }
}
