use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::{index::sample, IndexedRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::datamodel::{GeneAnnotation, GeneInteractionList, SnpMap};
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Where the causal SNPs sit, labelled `a` to `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// (a) uniformly over all SNPs
    Random,
    /// (b) a run of consecutive SNPs on one chromosome
    SequenceAdjacent,
    /// (c) near one gene
    SameGene,
    /// (d) near two interacting genes
    TwoGenes,
    /// (e) near three pairwise interacting genes
    ThreeGenes,
    /// (f) near five pairwise interacting genes
    FiveGenes,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        ScenarioKind::Random,
        ScenarioKind::SequenceAdjacent,
        ScenarioKind::SameGene,
        ScenarioKind::TwoGenes,
        ScenarioKind::ThreeGenes,
        ScenarioKind::FiveGenes,
    ];

    pub fn letter(self) -> char {
        match self {
            ScenarioKind::Random => 'a',
            ScenarioKind::SequenceAdjacent => 'b',
            ScenarioKind::SameGene => 'c',
            ScenarioKind::TwoGenes => 'd',
            ScenarioKind::ThreeGenes => 'e',
            ScenarioKind::FiveGenes => 'f',
        }
    }

    /// Number of interacting genes the causal SNPs are spread over.
    fn gene_count(self) -> Option<usize> {
        match self {
            ScenarioKind::SameGene => Some(1),
            ScenarioKind::TwoGenes => Some(2),
            ScenarioKind::ThreeGenes => Some(3),
            ScenarioKind::FiveGenes => Some(5),
            _ => None,
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| s.len() == 1 && s.starts_with(k.letter()))
            .ok_or_else(|| Error::invalid(format!("unknown scenario `{s}`, expected one of a..f")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub n_causal: usize,
}

impl Scenario {
    pub fn new(kind: ScenarioKind, n_causal: usize) -> Self {
        Scenario { kind, n_causal }
    }
}

/// Draws the causal SNP set (canonical map indices, ascending).
///
/// Gene scenarios split `n_causal` as evenly as possible over the chosen
/// genes, earlier genes (in annotation order) taking the remainder. Each
/// gene's SNPs are drawn from those near it and near no other chosen gene.
pub fn place_causal(
    scenario: Scenario,
    map: &SnpMap,
    genes: &GeneAnnotation,
    interactions: &GeneInteractionList,
    window: u64,
    rng: &mut StreamRng,
) -> Result<Vec<usize>> {
    let n = map.len();
    let k = scenario.n_causal;
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "n_causal must lie in 1..={n}, got {k}"
        )));
    }
    let infeasible = |msg: String| Error::Infeasible(format!("scenario {}: {msg}", scenario.kind));
    let mut causal = match scenario.kind {
        ScenarioKind::Random => sample(rng, n, k).into_vec(),
        ScenarioKind::SequenceAdjacent => {
            let records = map.records();
            let starts: Vec<usize> = (0..n)
                .filter(|&s| s + k <= n && records[s].chrom == records[s + k - 1].chrom)
                .collect();
            let &start = starts
                .choose(rng)
                .ok_or_else(|| infeasible(format!("no chromosome carries {k} SNPs")))?;
            (start..start + k).collect()
        }
        kind => {
            let t = kind.gene_count().expect("gene scenario");
            let near: Vec<BTreeSet<usize>> = genes
                .genes()
                .iter()
                .map(|g| genes.nearby_snps(g, map, window).collect())
                .collect();
            let quota = |i: usize| k / t + usize::from(i < k % t);
            let exclusive = |tuple: &[usize], i: usize| -> Vec<usize> {
                near[tuple[i]]
                    .iter()
                    .copied()
                    .filter(|p| {
                        tuple
                            .iter()
                            .enumerate()
                            .all(|(j, &g)| j == i || !near[g].contains(p))
                    })
                    .collect()
            };
            let candidates: Vec<Vec<usize>> = cliques(genes, interactions, t)
                .into_iter()
                .filter(|tuple| (0..t).all(|i| exclusive(tuple, i).len() >= quota(i)))
                .collect();
            let tuple = candidates.choose(rng).ok_or_else(|| {
                infeasible(format!(
                    "no {t} pairwise interacting genes with enough nearby SNPs for {k} causal SNPs"
                ))
            })?;
            let mut chosen = Vec::with_capacity(k);
            for i in 0..t {
                let pool = exclusive(tuple, i);
                chosen.extend(
                    sample(rng, pool.len(), quota(i))
                        .into_iter()
                        .map(|j| pool[j]),
                );
            }
            chosen
        }
    };
    causal.sort_unstable();
    debug_assert_eq!(causal.iter().collect::<HashSet<_>>().len(), k);
    Ok(causal)
}

/// All sets of `t` genes (ascending annotation indices) that are pairwise
/// connected in `interactions`. For `t = 1` every gene qualifies.
pub(crate) fn cliques(
    genes: &GeneAnnotation,
    interactions: &GeneInteractionList,
    t: usize,
) -> Vec<Vec<usize>> {
    let g = genes.len();
    let mut adj = vec![BTreeSet::new(); g];
    for (a, b) in interactions.pairs() {
        if let (Some(i), Some(j)) = (genes.index_of(a), genes.index_of(b)) {
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(t);
    fn extend(
        adj: &[BTreeSet<usize>],
        t: usize,
        from: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == t {
            out.push(current.clone());
            return;
        }
        for v in from..adj.len() {
            if current.iter().all(|&u| adj[u].contains(&v)) {
                current.push(v);
                extend(adj, t, v + 1, current, out);
                current.pop();
            }
        }
    }
    extend(&adj, t, 0, &mut current, &mut out);
    out
}

/// Draws a uniform random subset of size `k` of `{0..n}`, ascending.
pub(crate) fn random_subset(n: usize, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut v = sample(rng, n, k.min(n)).into_vec();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn toy() -> (SnpMap, GeneAnnotation, GeneInteractionList) {
        // five genes on chromosome 1, each with exactly four SNPs in its body
        let mut map = String::new();
        let mut genes = String::new();
        for g in 0..5 {
            for s in 0..4 {
                map.push_str(&format!("s{g}{s}\t1\t{}\n", g * 1000 + s * 10 + 100));
            }
            genes.push_str(&format!(
                "G{g}\t1\t{}\t{}\n",
                g * 1000 + 100,
                g * 1000 + 130
            ));
        }
        let mut pairs = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                pairs.push((format!("G{a}"), format!("G{b}")));
            }
        }
        (
            SnpMap::read_tsv(map.as_bytes()).unwrap(),
            GeneAnnotation::read_tsv(genes.as_bytes()).unwrap(),
            GeneInteractionList::from_pairs(pairs).0,
        )
    }

    #[test]
    fn five_gene_split_is_even() {
        let (map, genes, inter) = toy();
        let mut rng = rng::stream(1, "t", 0);
        let c = place_causal(
            Scenario::new(ScenarioKind::FiveGenes, 20),
            &map,
            &genes,
            &inter,
            0,
            &mut rng,
        )
        .unwrap();
        assert_eq!(c, (0..20).collect::<Vec<_>>());
        let c = place_causal(
            Scenario::new(ScenarioKind::ThreeGenes, 7),
            &map,
            &genes,
            &inter,
            0,
            &mut rng,
        )
        .unwrap();
        assert_eq!(c.len(), 7);
        let err = place_causal(
            Scenario::new(ScenarioKind::SameGene, 5),
            &map,
            &genes,
            &inter,
            0,
            &mut rng,
        );
        assert!(err.unwrap_err().is_infeasible());
    }

    #[test]
    fn adjacency_scenario_is_a_run() {
        let (map, genes, inter) = toy();
        let mut rng = rng::stream(2, "t", 0);
        let c = place_causal(
            Scenario::new(ScenarioKind::SequenceAdjacent, 6),
            &map,
            &genes,
            &inter,
            0,
            &mut rng,
        )
        .unwrap();
        assert!(c.windows(2).all(|w| w[1] == w[0] + 1));
    }

    #[test]
    fn scenario_letters_round_trip() {
        for k in ScenarioKind::ALL {
            assert_eq!(k.letter().to_string().parse::<ScenarioKind>().unwrap(), k);
        }
        assert!("g".parse::<ScenarioKind>().is_err());
        assert!("ab".parse::<ScenarioKind>().is_err());
    }
}
