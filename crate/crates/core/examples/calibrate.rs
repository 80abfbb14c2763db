//! Mean accuracy of bare learners on one benchmark stream.
//!
//! `cargo run --release --example calibrate -- SINE 10000 10 nb knn5 knn50 knn40w600n knn5+rddm`
//!
//! A trailing `n` turns on per-window min-max scaling for k-NN.

use std::env;

use streamlearn::drift::{compose, DriftPlan};
use streamlearn::StreamSource;
use streamlearn::evaluation::{aggregate, prequential_run, PrequentialConfig};
use streamlearn::generators::{Dataset, DatasetOptions};
use streamlearn::detectors::{Ddm, Rddm, WrappedLearner};
use streamlearn::learners::{HoeffdingConfig, KnnConfig, LearnerSpec};

fn parse_learner(s: &str) -> LearnerSpec {
    if s == "nb" {
        return LearnerSpec::NaiveBayes;
    }
    if s == "ht" {
        return LearnerSpec::Hoeffding(HoeffdingConfig::default());
    }
    let rest = s.strip_prefix("knn").expect("nb, ht or knnK[wW][n]");
    let (rest, normalize) = rest.strip_suffix('n').map_or((rest, false), |r| (r, true));
    let (k, w) = rest.split_once('w').map_or((rest, "1000"), |(k, w)| (k, w));
    LearnerSpec::Knn(KnnConfig { k: k.parse().unwrap(), window: w.parse().unwrap(), normalize })
}

fn main() {
    let args: Vec<String> = env::args().skip(1).collect();
    let dataset: Dataset = args[0].parse().unwrap();
    let size: usize = args[1].parse().unwrap();
    let seeds: u64 = args[2].parse().unwrap();
    let mut opts = DatasetOptions::default();
    let env_or = |name: &str, default: f64| env::var(name).map_or(default, |v| v.parse().unwrap());
    opts.led_swaps = env_or("LED_SWAPS", opts.led_swaps as f64) as usize;
    opts.waveform_swaps = env_or("WAVEFORM_SWAPS", opts.waveform_swaps as f64) as usize;
    for name in &args[3..] {
        let (learner, detector) = name.split_once('+').unwrap_or((name, "none"));
        let spec = parse_learner(learner);
        let accs: Vec<f64> = (1..=seeds)
            .map(|seed| {
                let plan = DriftPlan::abrupt(dataset.concepts(seed, &opts), size);
                let mut stream = compose(&plan, seed).unwrap();
                let model = spec.build(stream.schema());
                let cfg = PrequentialConfig::new(size);
                match detector {
                    "ddm" => prequential_run(&mut stream, &mut WrappedLearner::new(model, Ddm::default()), &cfg),
                    "rddm" => prequential_run(&mut stream, &mut WrappedLearner::new(model, Rddm::default()), &cfg),
                    _ => prequential_run(&mut stream, &mut { model }, &cfg),
                }
                .unwrap()
                .mean_acc
            })
            .collect();
        let (m, h) = aggregate(&accs).unwrap();
        println!("{dataset} {size} {name}: {m:.2} +- {h:.2}");
    }
}
