//! Reduced networks: the strongest outgoing links of each selected node in
//! the composite matrix `G_rr + G_qrnd`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dense::SquareMatrix;
use crate::error::{Error, Result};
use crate::regomax::RegomaxResult;

/// Number of outgoing links drawn per node unless configured otherwise.
pub const DEFAULT_LINKS_PER_NODE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    /// Backed by a raw flow that dominates the indirect contribution.
    Direct,
    /// Carried mainly (or only) by indirect pathways.
    Hidden,
}

impl LinkKind {
    pub fn name(self) -> &'static str {
        match self {
            LinkKind::Direct => "direct",
            LinkKind::Hidden => "hidden",
        }
    }

    /// Hidden when there is no direct component or the indirect one is larger.
    pub fn classify(direct: f64, indirect: f64) -> Self {
        if direct == 0.0 || indirect > direct {
            LinkKind::Hidden
        } else {
            LinkKind::Direct
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkNode {
    pub label: String,
    pub in_degree: usize,
}

/// Link `source -> target`; both are positions in the reduced set.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkEdge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
    pub kind: LinkKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedNetwork {
    pub nodes: Vec<NetworkNode>,
    /// Grouped by ascending source, strongest first within a source.
    pub edges: Vec<NetworkEdge>,
    /// Links requested per node after clamping.
    pub k: usize,
    /// The requested `k` when it exceeded `N_r - 1`.
    pub clamped_from: Option<usize>,
}

pub fn build_reduced_network(result: &RegomaxResult, k: usize) -> Result<ReducedNetwork> {
    build_from_components(&result.g_rr, &result.g_qrnd, result.reduced.labels(), k)
}

/// Selection over explicit direct and indirect components.
///
/// Column `j` of each matrix holds the links leaving node `j`.
pub fn build_from_components(
    direct: &SquareMatrix,
    indirect: &SquareMatrix,
    labels: &[String],
    k: usize,
) -> Result<ReducedNetwork> {
    let n = direct.n();
    if indirect.n() != n || labels.len() != n {
        return Err(Error::Validation("component shapes disagree".into()));
    }
    if k == 0 {
        return Err(Error::range("k", k, ">= 1"));
    }
    let max_k = n.saturating_sub(1);
    let (k_used, clamped_from) = if k > max_k { (max_k, Some(k)) } else { (k, None) };

    let mut edges = Vec::new();
    let mut in_degree = vec![0usize; n];
    for source in 0..n {
        let mut candidates: Vec<(usize, f64)> = (0..n)
            .filter(|&t| t != source)
            .map(|t| (t, direct.get(t, source) + indirect.get(t, source)))
            .filter(|&(_, w)| w > 0.0)
            .collect();
        candidates.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        for &(target, weight) in candidates.iter().take(k_used) {
            in_degree[target] += 1;
            edges.push(NetworkEdge {
                source,
                target,
                weight,
                kind: LinkKind::classify(direct.get(target, source), indirect.get(target, source)),
            });
        }
    }
    let nodes = labels
        .iter()
        .zip(in_degree)
        .map(|(label, in_degree)| NetworkNode {
            label: label.clone(),
            in_degree,
        })
        .collect();
    Ok(ReducedNetwork {
        nodes,
        edges,
        k: k_used,
        clamped_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("n{i}")).collect()
    }

    #[test]
    fn one_direct_link_per_column() {
        let direct = SquareMatrix::from_fn(4, |i, j| if i == (j + 1) % 4 { 0.5 } else { 0.0 });
        let net = build_from_components(&direct, &SquareMatrix::zeros(4), &labels(4), 4).unwrap();
        assert_eq!(net.k, 3);
        assert_eq!(net.clamped_from, Some(4));
        assert_eq!(net.edges.len(), 4);
        assert!(net.edges.iter().all(|e| e.kind == LinkKind::Direct));
        assert!(net.nodes.iter().all(|n| n.in_degree == 1));
    }

    #[test]
    fn indirect_only_links_are_hidden() {
        let indirect = SquareMatrix::from_fn(3, |i, j| if i != j { 0.1 + i as f64 * 0.01 } else { 0.0 });
        let net = build_from_components(&SquareMatrix::zeros(3), &indirect, &labels(3), 2).unwrap();
        assert_eq!(net.edges.len(), 6);
        assert!(net.edges.iter().all(|e| e.kind == LinkKind::Hidden));
    }

    #[test]
    fn ties_break_by_target_and_zero_weights_skipped() {
        let direct = SquareMatrix::from_fn(4, |i, j| if j == 0 && i > 0 { 0.2 } else { 0.0 });
        let net = build_from_components(&direct, &SquareMatrix::zeros(4), &labels(4), 2).unwrap();
        let targets: Vec<usize> = net.edges.iter().map(|e| e.target).collect();
        assert_eq!(targets, vec![1, 2]);
        assert!(net.edges.iter().all(|e| e.source == 0));
    }

    #[test]
    fn rejects_zero_k() {
        let z = SquareMatrix::zeros(3);
        assert!(build_from_components(&z, &z, &labels(3), 0).is_err());
    }

    #[test]
    fn classification_rule() {
        assert_eq!(LinkKind::classify(0.0, 0.1), LinkKind::Hidden);
        assert_eq!(LinkKind::classify(0.2, 0.1), LinkKind::Direct);
        assert_eq!(LinkKind::classify(0.1, 0.2), LinkKind::Hidden);
        assert_eq!(LinkKind::classify(0.1, 0.1), LinkKind::Direct);
        assert_eq!(LinkKind::classify(0.3, -0.1), LinkKind::Direct);
    }
}
