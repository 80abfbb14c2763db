//! Hoeffding tree (VFDT) with Naive Bayes leaves.
//!
//! Every leaf keeps a full [`NaiveBayes`] state. After each `grace_period`
//! arrivals at an impure leaf, the information gain of the best split on
//! every attribute is computed; the leaf splits on the best attribute when
//! its gain beats the runner-up (a "no split" candidate with gain 0 always
//! competes) by more than the Hoeffding bound, or when the bound has fallen
//! below the tie threshold.
//!
//! Nominal attributes split multiway. Numeric attributes split in two at one
//! of `numeric_bins` evenly spaced thresholds between the observed extremes,
//! with per-class weights apportioned by the Gaussian CDF.

use statrs::function::erf::erf;

use crate::domain::{FeatureValue, LabeledInstance, Learner, Schema};
use crate::learners::naive_bayes::{argmax, AttributeStats, NaiveBayes};

/// `sqrt(R^2 ln(1/delta) / (2n))`.
pub fn hoeffding_bound(range: f64, delta: f64, n: f64) -> f64 {
    (range * range * (1.0 / delta).ln() / (2.0 * n)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafPrediction {
    MajorityClass,
    NaiveBayes,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoeffdingConfig {
    pub grace_period: u64,
    pub split_confidence: f64,
    pub tie_threshold: f64,
    pub numeric_bins: usize,
    pub min_branch_fraction: f64,
    pub leaf_prediction: LeafPrediction,
    /// Keep the leaf size of every split attempt (for tests and diagnostics).
    pub trace_attempts: bool,
}

impl Default for HoeffdingConfig {
    fn default() -> Self {
        HoeffdingConfig {
            grace_period: 200,
            split_confidence: 1e-7,
            tie_threshold: 0.05,
            numeric_bins: 10,
            min_branch_fraction: 0.01,
            leaf_prediction: LeafPrediction::NaiveBayes,
            trace_attempts: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitTest {
    /// `value <= threshold` goes to child 0, the rest to child 1.
    Numeric { threshold: f64 },
    /// Child index = category index.
    Nominal,
}

#[derive(Debug, Clone)]
struct Leaf {
    stats: NaiveBayes,
    seen_at_last_attempt: f64,
}

#[derive(Debug, Clone)]
struct Split {
    attribute: usize,
    test: SplitTest,
    children: Vec<usize>,
    class_counts: Vec<f64>,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(Leaf),
    Split(Split),
}

#[derive(Debug, Clone)]
struct Candidate {
    attribute: usize,
    test: SplitTest,
    merit: f64,
    branches: usize,
}

#[derive(Debug, Clone)]
pub struct HoeffdingTree {
    config: HoeffdingConfig,
    schema: Schema,
    nodes: Vec<Node>,
    attempts: Vec<u64>,
}

fn entropy(dist: &[f64]) -> f64 {
    let total: f64 = dist.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    -dist
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / total;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Information gain of splitting `pre` into `post`, `-inf` when fewer than
/// two branches carry at least `min_frac` of the weight.
pub fn info_gain(pre: &[f64], post: &[Vec<f64>], min_frac: f64) -> f64 {
    let weights: Vec<f64> = post.iter().map(|d| d.iter().sum()).collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let heavy = weights.iter().filter(|&&w| w / total >= min_frac).count();
    if heavy < 2 {
        return f64::NEG_INFINITY;
    }
    let after: f64 = post.iter().zip(&weights).map(|(d, w)| w / total * entropy(d)).sum();
    entropy(pre) - after
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

impl HoeffdingTree {
    pub fn new(schema: &Schema, config: HoeffdingConfig) -> Self {
        let root = Node::Leaf(Leaf { stats: NaiveBayes::new(schema), seen_at_last_attempt: 0.0 });
        HoeffdingTree { config, schema: schema.clone(), nodes: vec![root], attempts: Vec::new() }
    }

    pub fn config(&self) -> &HoeffdingConfig {
        &self.config
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }

    pub fn split_count(&self) -> usize {
        self.nodes.len() - self.leaf_count()
    }

    /// Split attribute of the root, if it has split.
    pub fn root_split(&self) -> Option<(usize, SplitTest)> {
        match &self.nodes[0] {
            Node::Split(s) => Some((s.attribute, s.test)),
            Node::Leaf(_) => None,
        }
    }

    /// Leaf sizes at which split attempts happened (needs `trace_attempts`).
    pub fn attempts(&self) -> &[u64] {
        &self.attempts
    }

    fn child_index(split: &Split, value: FeatureValue) -> usize {
        match split.test {
            SplitTest::Numeric { threshold } => usize::from(value.as_f64() > threshold),
            SplitTest::Nominal => (value.as_f64() as usize).min(split.children.len() - 1),
        }
    }

    /// Route `values` to a leaf, returning the node path root..=leaf.
    fn route(&self, values: &[FeatureValue]) -> Vec<usize> {
        let mut path = vec![0];
        let mut node = 0;
        while let Node::Split(split) = &self.nodes[node] {
            node = split.children[Self::child_index(split, values[split.attribute])];
            path.push(node);
        }
        path
    }

    /// Index of the leaf `values` falls into.
    pub fn leaf_of(&self, values: &[FeatureValue]) -> usize {
        *self.route(values).last().expect("nonempty path")
    }

    fn candidates(&self, leaf: &NaiveBayes) -> Vec<Candidate> {
        let pre = leaf.label_counts.clone();
        let min_frac = self.config.min_branch_fraction;
        let mut out = Vec::new();
        for (attribute, stats) in leaf.attributes.iter().enumerate() {
            match stats {
                AttributeStats::Nominal { cardinality, counts } => {
                    let post: Vec<Vec<f64>> = (0..*cardinality)
                        .map(|v| (0..pre.len()).map(|l| counts[l * cardinality + v]).collect())
                        .collect();
                    let merit = info_gain(&pre, &post, min_frac);
                    out.push(Candidate { attribute, test: SplitTest::Nominal, merit, branches: *cardinality });
                }
                AttributeStats::Numeric { per_label } => {
                    let observed = per_label.iter().filter(|s| s.count() > 0);
                    let lo = observed.clone().map(|s| s.min()).fold(f64::INFINITY, f64::min);
                    let hi = observed.map(|s| s.max()).fold(f64::NEG_INFINITY, f64::max);
                    if !(hi > lo) {
                        continue;
                    }
                    let bins = self.config.numeric_bins;
                    let mut best: Option<Candidate> = None;
                    for i in 0..bins {
                        let threshold = lo + (hi - lo) * (i + 1) as f64 / (bins + 1) as f64;
                        let mut left = vec![0.0; pre.len()];
                        let mut right = vec![0.0; pre.len()];
                        for (l, s) in per_label.iter().enumerate() {
                            let w = s.count() as f64;
                            if w == 0.0 {
                                continue;
                            }
                            let below = if threshold < s.min() {
                                0.0
                            } else if threshold >= s.max() {
                                w
                            } else {
                                let sd = s.std_dev();
                                if sd > 0.0 {
                                    w * normal_cdf((threshold - s.mean()) / sd)
                                } else if threshold >= s.mean() {
                                    w
                                } else {
                                    0.0
                                }
                            };
                            left[l] = below;
                            right[l] = w - below;
                        }
                        let merit = info_gain(&pre, &[left, right], min_frac);
                        if best.as_ref().is_none_or(|b| merit > b.merit) {
                            best = Some(Candidate {
                                attribute,
                                test: SplitTest::Numeric { threshold },
                                merit,
                                branches: 2,
                            });
                        }
                    }
                    out.extend(best);
                }
            }
        }
        out
    }

    fn attempt_split(&mut self, leaf_index: usize) {
        let Node::Leaf(leaf) = &self.nodes[leaf_index] else { return };
        let stats = &leaf.stats;
        if self.config.trace_attempts {
            self.attempts.push(stats.total() as u64);
        }
        let mut candidates = self.candidates(stats);
        candidates.sort_by(|a, b| b.merit.total_cmp(&a.merit));
        let best = match candidates.first() {
            Some(c) if c.merit > 0.0 => c.clone(),
            _ => return,
        };
        // the "no split" alternative has merit 0
        let second = candidates.get(1).map_or(0.0, |c| c.merit.max(0.0));
        let range = (self.schema.num_labels() as f64).log2();
        let epsilon = hoeffding_bound(range, self.config.split_confidence, stats.total());
        if best.merit - second > epsilon || epsilon < self.config.tie_threshold {
            let class_counts = stats.label_counts().to_vec();
            let first_child = self.nodes.len();
            for _ in 0..best.branches {
                self.nodes.push(Node::Leaf(Leaf { stats: NaiveBayes::new(&self.schema), seen_at_last_attempt: 0.0 }));
            }
            self.nodes[leaf_index] = Node::Split(Split {
                attribute: best.attribute,
                test: best.test,
                children: (first_child..first_child + best.branches).collect(),
                class_counts,
            });
        }
    }
}

impl Learner for HoeffdingTree {
    fn train(&mut self, inst: &LabeledInstance) {
        let leaf_index = self.leaf_of(&inst.values);
        let grace = self.config.grace_period as f64;
        let due = {
            let Node::Leaf(leaf) = &mut self.nodes[leaf_index] else { unreachable!("route ends at a leaf") };
            leaf.stats.train(inst);
            let seen = leaf.stats.total();
            if seen - leaf.seen_at_last_attempt >= grace {
                leaf.seen_at_last_attempt = seen;
                let pure = leaf.stats.label_counts().iter().filter(|&&c| c > 0.0).count() < 2;
                !pure
            } else {
                false
            }
        };
        if due {
            self.attempt_split(leaf_index);
        }
    }

    fn classify(&self, values: &[FeatureValue]) -> Option<usize> {
        let path = self.route(values);
        let leaf = *path.last().expect("nonempty path");
        if let Node::Leaf(l) = &self.nodes[leaf] {
            if l.stats.total() > 0.0 {
                return match self.config.leaf_prediction {
                    LeafPrediction::NaiveBayes => l.stats.classify(values),
                    LeafPrediction::MajorityClass => l.stats.majority(),
                };
            }
        }
        path.iter().rev().find_map(|&n| match &self.nodes[n] {
            Node::Split(s) => argmax(&s.class_counts),
            Node::Leaf(_) => None,
        })
    }

    fn reset(&mut self) {
        *self = HoeffdingTree::new(&self.schema, self.config);
    }
}
