//! Friedman test, Nemenyi critical difference and CD diagrams over a
//! datasets × methods result matrix.

mod diagram;
mod qtable;

use std::io;

use statrs::distribution::{ContinuousCDF, FisherSnedecor};
use thiserror::Error;

pub use diagram::{cd_diagram, cd_diagram_svg};
pub use qtable::{q_value, Alpha, Q_ALPHA_05, Q_ALPHA_10};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("K ≥ 2 required (got {0} method)")]
    TooFewMethods(usize),
    #[error("N ≥ 2 required (got {0} dataset)")]
    TooFewDatasets(usize),
    #[error("row {row} has {got} cells, expected {expected}")]
    Ragged { row: usize, got: usize, expected: usize },
    #[error("cell ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("Friedman statistic is saturated: chi2_F = N(K-1) = {0}, every dataset ranks the methods identically")]
    Saturated(f64),
    #[error("K = {0} is outside the tabulated range 2..=20")]
    KOutOfRange(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    /// Accuracy-like scores: the largest value gets rank 1.
    #[default]
    HigherIsBetter,
    /// Cost-like scores such as run time: the smallest value gets rank 1.
    LowerIsBetter,
}

/// Rows are datasets, columns are methods.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultMatrix {
    datasets: Vec<String>,
    methods: Vec<String>,
    cells: Vec<Vec<f64>>,
}

impl ResultMatrix {
    pub fn new(datasets: Vec<String>, methods: Vec<String>, cells: Vec<Vec<f64>>) -> Result<Self, StatsError> {
        if methods.len() < 2 {
            return Err(StatsError::TooFewMethods(methods.len()));
        }
        if cells.len() < 2 || datasets.len() != cells.len() {
            return Err(StatsError::TooFewDatasets(cells.len().min(datasets.len())));
        }
        for (row, r) in cells.iter().enumerate() {
            if r.len() != methods.len() {
                return Err(StatsError::Ragged { row, got: r.len(), expected: methods.len() });
            }
            if let Some(col) = r.iter().position(|v| !v.is_finite()) {
                return Err(StatsError::NonFinite { row, col });
            }
        }
        Ok(ResultMatrix { datasets, methods, cells })
    }

    pub fn datasets(&self) -> &[String] {
        &self.datasets
    }

    pub fn methods(&self) -> &[String] {
        &self.methods
    }

    pub fn cells(&self) -> &[Vec<f64>] {
        &self.cells
    }

    pub fn n(&self) -> usize {
        self.cells.len()
    }

    pub fn k(&self) -> usize {
        self.methods.len()
    }
}

/// Ranks of one row, 1 = best; tied values share the mean of their ranks.
pub fn rank_row(row: &[f64], direction: Direction) -> Vec<f64> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| match direction {
        Direction::HigherIsBetter => row[b].total_cmp(&row[a]),
        Direction::LowerIsBetter => row[a].total_cmp(&row[b]),
    });
    let mut ranks = vec![0.0; row.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && row[order[j]] == row[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) hold ranks i+1..=j
        let shared = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = shared;
        }
        i = j;
    }
    ranks
}

/// Mean rank of every method across datasets.
pub fn average_ranks(m: &ResultMatrix, direction: Direction) -> Vec<f64> {
    let mut sums = vec![0.0; m.k()];
    for row in m.cells() {
        for (s, r) in sums.iter_mut().zip(rank_row(row, direction)) {
            *s += r;
        }
    }
    sums.into_iter().map(|s| s / m.n() as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Friedman {
    pub chi2_f: f64,
    pub f_f: f64,
    /// Upper 5% point of F(K-1, (K-1)(N-1)).
    pub critical: f64,
    pub reject: bool,
}

/// `F_F` from `chi2_F`, the Iman-Davenport correction.
pub fn iman_davenport(chi2_f: f64, n: usize, k: usize) -> f64 {
    (n as f64 - 1.0) * chi2_f / (n as f64 * (k as f64 - 1.0) - chi2_f)
}

pub fn friedman_chi2(avg_ranks: &[f64], n: usize) -> f64 {
    let k = avg_ranks.len() as f64;
    let sum_sq: f64 = avg_ranks.iter().map(|r| r * r).sum();
    12.0 * n as f64 / (k * (k + 1.0)) * (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0)
}

pub fn friedman_ff(m: &ResultMatrix, direction: Direction) -> Result<Friedman, StatsError> {
    let (n, k) = (m.n(), m.k());
    let chi2_f = friedman_chi2(&average_ranks(m, direction), n).max(0.0);
    let saturation = n as f64 * (k as f64 - 1.0);
    if (chi2_f - saturation).abs() <= 1e-9 * saturation {
        return Err(StatsError::Saturated(saturation));
    }
    let f_f = iman_davenport(chi2_f, n, k);
    let dist = FisherSnedecor::new((k - 1) as f64, ((k - 1) * (n - 1)) as f64).expect("positive degrees of freedom");
    let critical = dist.inverse_cdf(0.95);
    Ok(Friedman { chi2_f, f_f, critical, reject: f_f > critical })
}

/// `q_alpha(K) * sqrt(K(K+1) / (6N))`.
pub fn nemenyi_cd(k: usize, n: usize, alpha: Alpha) -> Result<f64, StatsError> {
    let q = q_value(k, alpha).ok_or(StatsError::KOutOfRange(k))?;
    Ok(q * (k as f64 * (k as f64 + 1.0) / (6.0 * n as f64)).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankSummary {
    pub methods: Vec<String>,
    pub avg_ranks: Vec<f64>,
    pub cd: f64,
    /// Maximal sets of methods whose pairwise rank gaps are all below `cd`,
    /// as method indices ordered by rank. Singletons are omitted.
    pub groups: Vec<Vec<usize>>,
}

/// Method indices sorted by average rank (best first, ties by index).
pub fn rank_order(avg_ranks: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..avg_ranks.len()).collect();
    order.sort_by(|&a, &b| avg_ranks[a].total_cmp(&avg_ranks[b]).then(a.cmp(&b)));
    order
}

/// Maximal runs of consecutive methods (in rank order) spanning less than `cd`.
pub fn cd_groups(avg_ranks: &[f64], cd: f64) -> Vec<Vec<usize>> {
    let order = rank_order(avg_ranks);
    let mut groups = Vec::new();
    let mut last_end = 0;
    for start in 0..order.len() {
        let mut end = start;
        while end + 1 < order.len() && avg_ranks[order[end + 1]] - avg_ranks[order[start]] < cd {
            end += 1;
        }
        if end > start && end > last_end {
            groups.push(order[start..=end].to_vec());
        }
        last_end = last_end.max(end);
    }
    groups
}

impl RankSummary {
    pub fn new(m: &ResultMatrix, direction: Direction, alpha: Alpha) -> Result<Self, StatsError> {
        let avg_ranks = average_ranks(m, direction);
        let cd = nemenyi_cd(m.k(), m.n(), alpha)?;
        let groups = cd_groups(&avg_ranks, cd);
        Ok(RankSummary { methods: m.methods().to_vec(), avg_ranks, cd, groups })
    }
}

/// `method,avg_rank` rows, best rank first.
pub fn write_ranks_csv<W: io::Write>(mut out: W, summary: &RankSummary) -> io::Result<()> {
    writeln!(out, "method,avg_rank")?;
    for i in rank_order(&summary.avg_ranks) {
        writeln!(out, "{},{:.6}", summary.methods[i], summary.avg_ranks[i])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(cells: Vec<Vec<f64>>) -> ResultMatrix {
        let n = cells.len();
        let k = cells[0].len();
        ResultMatrix::new(
            (0..n).map(|i| format!("d{i}")).collect(),
            (0..k).map(|j| format!("m{j}")).collect(),
            cells,
        )
        .unwrap()
    }

    #[test]
    fn single_row_ranks() {
        assert_eq!(rank_row(&[10.0, 20.0, 30.0], Direction::HigherIsBetter), vec![3.0, 2.0, 1.0]);
        assert_eq!(rank_row(&[10.0, 20.0, 30.0], Direction::LowerIsBetter), vec![1.0, 2.0, 3.0]);
        assert_eq!(rank_row(&[5.0, 9.0, 9.0, 1.0], Direction::HigherIsBetter), vec![3.0, 1.5, 1.5, 4.0]);
        assert_eq!(rank_row(&[2.0; 4], Direction::HigherIsBetter), vec![2.5; 4]);
    }

    #[test]
    fn identical_columns_do_not_reject() {
        let m = matrix(vec![vec![0.7, 0.7, 0.7]; 10]);
        let f = friedman_ff(&m, Direction::HigherIsBetter).unwrap();
        assert_eq!(f.chi2_f, 0.0);
        assert_eq!(f.f_f, 0.0);
        assert!(!f.reject);
    }

    #[test]
    fn unanimous_ordering_is_saturated() {
        let m = matrix(vec![vec![3.0, 2.0, 1.0]; 10]);
        assert_eq!(friedman_ff(&m, Direction::HigherIsBetter), Err(StatsError::Saturated(20.0)));
    }

    #[test]
    fn dominant_column_rejects() {
        // column 0 always best; the other two alternate
        let cells: Vec<Vec<f64>> =
            (0..10).map(|i| if i % 2 == 0 { vec![9.0, 5.0, 4.0] } else { vec![9.0, 4.0, 5.0] }).collect();
        let m = matrix(cells);
        let f = friedman_ff(&m, Direction::HigherIsBetter).unwrap();
        // ranks: (1, 2.5, 2.5) → chi2 = 12*10/12 * (1 + 6.25 + 6.25 - 12) = 15
        assert!((f.chi2_f - 15.0).abs() < 1e-12);
        assert!((f.f_f - 9.0 * 15.0 / (20.0 - 15.0)).abs() < 1e-9);
        // F(2, 18) upper 5% point
        assert!((f.critical - 3.5546).abs() < 1e-3, "{}", f.critical);
        assert!(f.reject);
    }

    #[test]
    fn critical_differences() {
        let cd2 = nemenyi_cd(2, 25, Alpha::P05).unwrap();
        assert!((cd2 - 1.960 / 5.0).abs() < 1e-12);
        let cd = nemenyi_cd(12, 98, Alpha::P05).unwrap();
        assert!((cd - 1.683).abs() < 1e-3, "{cd}");
        let half = nemenyi_cd(7, 40, Alpha::P10).unwrap() / nemenyi_cd(7, 160, Alpha::P10).unwrap();
        assert!((half - 2.0).abs() < 1e-12);
        assert_eq!(nemenyi_cd(21, 10, Alpha::P05), Err(StatsError::KOutOfRange(21)));
        assert_eq!(nemenyi_cd(1, 10, Alpha::P05), Err(StatsError::KOutOfRange(1)));
    }

    #[test]
    fn groups_extremes() {
        assert_eq!(cd_groups(&[1.0, 1.2, 1.4], 1.0), vec![vec![0, 1, 2]]);
        assert!(cd_groups(&[1.0, 3.0, 5.0], 1.0).is_empty());
        assert_eq!(cd_groups(&[1.0, 1.5, 2.2, 2.9], 1.0), vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert_eq!(cd_groups(&[3.0, 1.0, 2.0], 1.5), vec![vec![1, 2], vec![2, 0]]);
    }

    #[test]
    fn matrix_validation() {
        let one = ResultMatrix::new(vec!["a".into(), "b".into()], vec!["x".into()], vec![vec![1.0], vec![2.0]]);
        assert_eq!(one.unwrap_err().to_string(), "K ≥ 2 required (got 1 method)");
        let ragged = ResultMatrix::new(
            vec!["a".into(), "b".into()],
            vec!["x".into(), "y".into()],
            vec![vec![1.0, 2.0], vec![2.0]],
        );
        assert!(matches!(ragged, Err(StatsError::Ragged { row: 1, .. })));
    }

    #[test]
    fn ranks_csv() {
        let s = RankSummary { methods: vec!["a".into(), "b".into()], avg_ranks: vec![1.75, 1.25], cd: 1.0, groups: vec![] };
        let mut buf = Vec::new();
        write_ranks_csv(&mut buf, &s).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "method,avg_rank\nb,1.250000\na,1.750000\n");
    }
}
