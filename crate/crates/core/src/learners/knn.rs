//! k-nearest-neighbors over a sliding window of the most recent instances.
//!
//! Training appends to a fixed-capacity ring buffer (O(1)). Classification
//! scans the window once in arrival order, keeping the best `k` candidates
//! in a bounded max-heap, for O(w (d + log k)) per query.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::domain::{AttributeKind, FeatureValue, LabeledInstance, Learner, Schema};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnnConfig {
    pub k: usize,
    pub window: usize,
    /// Rescale numeric attributes by the window's min-max range.
    pub normalize: bool,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig { k: 10, window: 1000, normalize: false }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Neighbor {
    pub distance: f64,
    pub label: usize,
    /// Arrival rank inside the window; smaller is older.
    pub order: usize,
}

impl PartialEq for Neighbor {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Neighbor {}

impl PartialOrd for Neighbor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Neighbor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.distance.total_cmp(&other.distance).then(self.order.cmp(&other.order))
    }
}

/// Max-heap holding the `k` smallest distances offered so far.
///
/// Once full, a candidate enters only if strictly closer than the current
/// maximum, so among equal distances the earlier candidate stays.
#[derive(Debug, Clone)]
pub struct DistanceHeap {
    k: usize,
    heap: BinaryHeap<Neighbor>,
}

impl DistanceHeap {
    pub fn new(k: usize) -> Self {
        DistanceHeap { k, heap: BinaryHeap::with_capacity(k + 1) }
    }

    #[inline]
    pub fn offer(&mut self, candidate: Neighbor) {
        if self.heap.len() < self.k {
            self.heap.push(candidate);
        } else if let Some(mut top) = self.heap.peek_mut() {
            if candidate.distance < top.distance {
                *top = candidate;
            }
        }
    }

    #[inline]
    pub fn peek(&self) -> Option<&Neighbor> {
        self.heap.peek()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn into_sorted_vec(self) -> Vec<Neighbor> {
        self.heap.into_sorted_vec()
    }
}

/// Most frequent label, lowest index on ties.
pub fn majority_label(labels: impl IntoIterator<Item = usize>, num_labels: usize) -> Option<usize> {
    let mut votes = vec![0usize; num_labels];
    let mut any = false;
    for l in labels {
        votes[l] += 1;
        any = true;
    }
    if !any {
        return None;
    }
    let mut best = 0;
    for (l, &v) in votes.iter().enumerate() {
        if v > votes[best] {
            best = l;
        }
    }
    Some(best)
}

#[derive(Debug, Clone)]
pub struct KnnClassifier {
    config: KnnConfig,
    nominal: Vec<bool>,
    all_numeric: bool,
    dim: usize,
    num_labels: usize,
    rows: Vec<f64>,
    labels: Vec<usize>,
    head: usize,
    len: usize,
}

impl KnnClassifier {
    pub fn new(schema: &Schema, config: KnnConfig) -> Self {
        assert!(config.k >= 1, "k must be at least 1");
        assert!(config.window >= 1, "window must hold at least one instance");
        let nominal: Vec<bool> =
            schema.attributes().iter().map(|a| matches!(a.kind, AttributeKind::Nominal { .. })).collect();
        let dim = nominal.len();
        KnnClassifier {
            config,
            all_numeric: nominal.iter().all(|n| !n),
            nominal,
            dim,
            num_labels: schema.num_labels(),
            rows: Vec::with_capacity(config.window * dim),
            labels: Vec::with_capacity(config.window),
            head: 0,
            len: 0,
        }
    }

    pub fn config(&self) -> KnnConfig {
        self.config
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn slot(&self, rank: usize) -> usize {
        (self.head + rank) % self.config.window
    }

    fn row(&self, slot: usize) -> &[f64] {
        &self.rows[slot * self.dim..(slot + 1) * self.dim]
    }

    /// Window contents, oldest first.
    pub fn window(&self) -> Vec<LabeledInstance> {
        (0..self.len)
            .map(|rank| {
                let slot = self.slot(rank);
                let values = self
                    .row(slot)
                    .iter()
                    .zip(&self.nominal)
                    .map(|(&v, &nom)| if nom { FeatureValue::Nominal(v as u32) } else { FeatureValue::Numeric(v) })
                    .collect();
                LabeledInstance::new(values, self.labels[slot])
            })
            .collect()
    }

    fn numeric_ranges(&self) -> Vec<(f64, f64)> {
        let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); self.dim];
        for rank in 0..self.len {
            for (r, &v) in ranges.iter_mut().zip(self.row(self.slot(rank))) {
                r.0 = r.0.min(v);
                r.1 = r.1.max(v);
            }
        }
        ranges
    }

    #[inline]
    fn squared_distance(&self, query: &[f64], row: &[f64], scale: Option<&[f64]>) -> f64 {
        match scale {
            None if self.all_numeric => query.iter().zip(row).map(|(a, b)| (a - b) * (a - b)).sum(),
            None => {
                let mut s = 0.0;
                for j in 0..self.dim {
                    let d = query[j] - row[j];
                    s += if self.nominal[j] { f64::from(u8::from(d != 0.0)) } else { d * d };
                }
                s
            }
            Some(scale) => {
                let mut s = 0.0;
                for j in 0..self.dim {
                    let d = query[j] - row[j];
                    s += if self.nominal[j] {
                        f64::from(u8::from(d != 0.0))
                    } else {
                        let scaled = d * scale[j];
                        scaled * scaled
                    };
                }
                s
            }
        }
    }

    /// The retained neighbors of `values`, nearest first. Distances are
    /// squared Euclidean (same order as Euclidean).
    pub fn neighbors(&self, values: &[FeatureValue]) -> Vec<Neighbor> {
        let query: Vec<f64> = values.iter().map(|v| v.as_f64()).collect();
        let scale: Option<Vec<f64>> = self.config.normalize.then(|| {
            self.numeric_ranges()
                .into_iter()
                .map(|(lo, hi)| if hi > lo { 1.0 / (hi - lo) } else { 0.0 })
                .collect()
        });
        let mut heap = DistanceHeap::new(self.config.k);
        for rank in 0..self.len {
            let slot = self.slot(rank);
            let distance = self.squared_distance(&query, self.row(slot), scale.as_deref());
            heap.offer(Neighbor { distance, label: self.labels[slot], order: rank });
        }
        heap.into_sorted_vec()
    }
}

impl Learner for KnnClassifier {
    fn train(&mut self, inst: &LabeledInstance) {
        debug_assert_eq!(inst.values.len(), self.dim);
        let w = self.config.window;
        if self.len < w {
            self.rows.extend(inst.values.iter().map(|v| v.as_f64()));
            self.labels.push(inst.label);
            self.len += 1;
        } else {
            let slot = self.head;
            let dim = self.dim;
            for (dst, v) in self.rows[slot * dim..(slot + 1) * dim].iter_mut().zip(&inst.values) {
                *dst = v.as_f64();
            }
            self.labels[slot] = inst.label;
            self.head = (self.head + 1) % w;
        }
    }

    fn classify(&self, values: &[FeatureValue]) -> Option<usize> {
        if self.len == 0 {
            return None;
        }
        majority_label(self.neighbors(values).into_iter().map(|n| n.label), self.num_labels)
    }

    fn reset(&mut self) {
        self.rows.clear();
        self.labels.clear();
        self.head = 0;
        self.len = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Attribute;

    fn schema(d: usize) -> Schema {
        Schema::new(
            (0..d).map(|i| Attribute::numeric(format!("a{i}"))).collect(),
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap()
    }

    fn inst(x: f64, label: usize) -> LabeledInstance {
        LabeledInstance::new(vec![FeatureValue::Numeric(x)], label)
    }

    #[test]
    fn window_is_fifo() {
        let mut knn = KnnClassifier::new(&schema(1), KnnConfig { k: 1, window: 3, normalize: false });
        for i in 1..=5 {
            knn.train(&inst(i as f64, 0));
        }
        let xs: Vec<f64> = knn.window().iter().map(|i| i.values[0].as_f64()).collect();
        assert_eq!(xs, vec![3.0, 4.0, 5.0]);
    }

    #[test]
    fn unit_window_keeps_last() {
        let mut knn = KnnClassifier::new(&schema(1), KnnConfig { k: 3, window: 1, normalize: false });
        for i in 0..10 {
            knn.train(&inst(i as f64, i % 3));
            assert_eq!(knn.window(), vec![inst(i as f64, i % 3)]);
        }
    }

    #[test]
    fn capacity_bound() {
        let mut knn = KnnClassifier::new(&schema(1), KnnConfig { k: 3, window: 1000, normalize: false });
        for i in 0..10_000 {
            knn.train(&inst(i as f64, 0));
        }
        assert_eq!(knn.len(), 1000);
        assert_eq!(knn.window()[0].values[0].as_f64(), 9000.0);
    }

    #[test]
    fn empty_window_has_no_model() {
        let knn = KnnClassifier::new(&schema(1), KnnConfig::default());
        assert_eq!(knn.classify(&[FeatureValue::Numeric(0.0)]), None);
    }

    #[test]
    fn single_neighbor_and_whole_window_majority() {
        let mut knn = KnnClassifier::new(&schema(1), KnnConfig { k: 50, window: 100, normalize: false });
        knn.train(&inst(0.0, 2));
        assert_eq!(knn.classify(&[FeatureValue::Numeric(123.0)]), Some(2));
        for i in 0..9 {
            knn.train(&inst(i as f64, if i < 5 { 1 } else { 0 }));
        }
        // 5 x label 1, 4 x label 0, 1 x label 2
        assert_eq!(knn.classify(&[FeatureValue::Numeric(100.0)]), Some(1));
    }

    #[test]
    fn equal_distances_keep_earlier_instance() {
        let mut knn = KnnClassifier::new(&schema(1), KnnConfig { k: 1, window: 10, normalize: false });
        knn.train(&inst(1.0, 1));
        knn.train(&inst(-1.0, 0));
        assert_eq!(knn.classify(&[FeatureValue::Numeric(0.0)]), Some(1));
    }

    #[test]
    fn majority_ties_go_to_lowest_label() {
        assert_eq!(majority_label([2, 1, 2, 1], 3), Some(1));
        assert_eq!(majority_label([], 3), None);
    }

    #[test]
    fn nominal_slots_use_overlap() {
        let s = Schema::new(
            vec![Attribute::nominal("c", 5), Attribute::numeric("x")],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let mut knn = KnnClassifier::new(&s, KnnConfig { k: 1, window: 10, normalize: false });
        knn.train(&LabeledInstance::new(vec![FeatureValue::Nominal(4), FeatureValue::Numeric(0.0)], 0));
        knn.train(&LabeledInstance::new(vec![FeatureValue::Nominal(1), FeatureValue::Numeric(1.2)], 1));
        // category 1 vs 4 costs 1 regardless of their numeric gap
        let q = [FeatureValue::Nominal(1), FeatureValue::Numeric(0.0)];
        let n = knn.neighbors(&q);
        assert_eq!(n[0].label, 0);
        assert!((n[0].distance - 1.0).abs() < 1e-12);
        assert!((n[0].distance - 1.0).abs() < (1.44f64 - n[0].distance).abs());
    }

    #[test]
    fn normalization_rescales_by_window_range() {
        let p = |x: f64, y: f64, l| LabeledInstance::new(vec![FeatureValue::Numeric(x), FeatureValue::Numeric(y)], l);
        let q = [FeatureValue::Numeric(100.0), FeatureValue::Numeric(1.0)];
        let mut raw = KnnClassifier::new(&schema(2), KnnConfig { k: 1, window: 10, normalize: false });
        let mut scaled = KnnClassifier::new(&schema(2), KnnConfig { k: 1, window: 10, normalize: true });
        for knn in [&mut raw, &mut scaled] {
            knn.train(&p(0.0, 0.0, 0));
            knn.train(&p(300.0, 1.0, 1));
        }
        // raw: 100^2 + 1 < 200^2; scaled: (1/3)^2 + 1 > (2/3)^2
        assert_eq!(raw.classify(&q), Some(0));
        assert_eq!(scaled.classify(&q), Some(1));
    }

    #[test]
    fn reset_clears_window() {
        let mut knn = KnnClassifier::new(&schema(1), KnnConfig::default());
        knn.train(&inst(1.0, 1));
        knn.reset();
        assert!(knn.is_empty());
        assert_eq!(knn.classify(&[FeatureValue::Numeric(1.0)]), None);
    }
}
