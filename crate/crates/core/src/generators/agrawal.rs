//! The Agrawal loan-applicant generator.
//!
//! Attribute distributions:
//!
//! | attribute  | kind                 | distribution                                         |
//! |------------|----------------------|------------------------------------------------------|
//! | salary     | numeric              | uniform on [20 000, 150 000)                         |
//! | commission | numeric              | 0 if salary >= 75 000, else uniform [10 000, 75 000) |
//! | age        | numeric (integer)    | uniform integer in 20..=80                           |
//! | elevel     | nominal, 5 values    | uniform 0..=4                                        |
//! | car        | nominal, 20 values   | uniform make 1..=20, stored as index 0..=19          |
//! | zipcode    | nominal, 9 values    | uniform 0..=8                                        |
//! | hvalue     | numeric              | (9 - zipcode) * 100 000 * uniform [0.5, 1.5)         |
//! | hyears     | numeric (integer)    | uniform integer in 1..=30                            |
//! | loan       | numeric              | uniform on [0, 500 000)                              |
//!
//! Group A is label 0, group B label 1. Noise flips the final label.

use rand::Rng;

use crate::domain::{Attribute, FeatureValue, LabeledInstance, Schema};
use crate::rng::StreamRng;

pub const GROUP_A: usize = 0;
pub const GROUP_B: usize = 1;

/// One applicant record, before labeling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Applicant {
    pub salary: f64,
    pub commission: f64,
    pub age: u32,
    pub elevel: u32,
    /// Car make index, 0..=19.
    pub car: u32,
    pub zipcode: u32,
    pub hvalue: f64,
    pub hyears: u32,
    pub loan: f64,
}

impl Applicant {
    pub fn sample(rng: &mut StreamRng) -> Self {
        let salary = 20_000.0 + 130_000.0 * rng.random::<f64>();
        let commission = if salary >= 75_000.0 { 0.0 } else { 10_000.0 + 65_000.0 * rng.random::<f64>() };
        let age = rng.random_range(20..=80);
        let elevel = rng.random_range(0..5);
        let car = rng.random_range(0..20);
        let zipcode = rng.random_range(0..9);
        let hvalue = f64::from(9 - zipcode) * 100_000.0 * (0.5 + rng.random::<f64>());
        let hyears = rng.random_range(1..=30);
        let loan = rng.random::<f64>() * 500_000.0;
        Applicant { salary, commission, age, elevel, car, zipcode, hvalue, hyears, loan }
    }

    pub fn values(&self) -> Vec<FeatureValue> {
        vec![
            FeatureValue::Numeric(self.salary),
            FeatureValue::Numeric(self.commission),
            FeatureValue::Numeric(f64::from(self.age)),
            FeatureValue::Nominal(self.elevel),
            FeatureValue::Nominal(self.car),
            FeatureValue::Nominal(self.zipcode),
            FeatureValue::Numeric(self.hvalue),
            FeatureValue::Numeric(f64::from(self.hyears)),
            FeatureValue::Numeric(self.loan),
        ]
    }
}

pub fn schema() -> Schema {
    Schema::new(
        vec![
            Attribute::numeric("salary"),
            Attribute::numeric("commission"),
            Attribute::numeric("age"),
            Attribute::nominal("elevel", 5),
            Attribute::nominal("car", 20),
            Attribute::nominal("zipcode", 9),
            Attribute::numeric("hvalue"),
            Attribute::numeric("hyears"),
            Attribute::numeric("loan"),
        ],
        vec!["groupA".into(), "groupB".into()],
    )
    .expect("static schema")
}

fn within(v: f64, lo: f64, hi: f64) -> bool {
    lo <= v && v <= hi
}

fn group(a: bool) -> usize {
    if a {
        GROUP_A
    } else {
        GROUP_B
    }
}

/// Noiseless group of `p` under classification function `function` (1..=10).
pub fn agrawal_group(function: u8, p: &Applicant) -> usize {
    let age = p.age;
    let salary = p.salary;
    let loan = p.loan;
    let elevel = p.elevel;
    match function {
        1 => group(age < 40 || age >= 60),
        2 => group(if age < 40 {
            within(salary, 50_000.0, 100_000.0)
        } else if age < 60 {
            within(salary, 75_000.0, 125_000.0)
        } else {
            within(salary, 25_000.0, 75_000.0)
        }),
        3 => group(if age < 40 {
            elevel <= 1
        } else if age < 60 {
            (1..=3).contains(&elevel)
        } else {
            (2..=4).contains(&elevel)
        }),
        4 => group(if age < 40 {
            if elevel <= 1 {
                within(salary, 25_000.0, 75_000.0)
            } else {
                within(salary, 50_000.0, 100_000.0)
            }
        } else if age < 60 {
            if (1..=3).contains(&elevel) {
                within(salary, 50_000.0, 100_000.0)
            } else {
                within(salary, 75_000.0, 125_000.0)
            }
        } else if (2..=4).contains(&elevel) {
            within(salary, 50_000.0, 100_000.0)
        } else {
            within(salary, 25_000.0, 75_000.0)
        }),
        5 => group(if age < 40 {
            if within(salary, 50_000.0, 100_000.0) {
                within(loan, 100_000.0, 300_000.0)
            } else {
                within(loan, 200_000.0, 400_000.0)
            }
        } else if age < 60 {
            if within(salary, 75_000.0, 125_000.0) {
                within(loan, 200_000.0, 400_000.0)
            } else {
                within(loan, 300_000.0, 500_000.0)
            }
        } else if within(salary, 25_000.0, 75_000.0) {
            within(loan, 300_000.0, 500_000.0)
        } else {
            within(loan, 100_000.0, 300_000.0)
        }),
        6 => {
            let total = salary + p.commission;
            group(if age < 40 {
                within(total, 50_000.0, 100_000.0)
            } else if age < 60 {
                within(total, 75_000.0, 125_000.0)
            } else {
                within(total, 25_000.0, 75_000.0)
            })
        }
        7 => {
            let disposable = 2.0 * (salary + p.commission) / 3.0 - loan / 5.0 - 20_000.0;
            group(disposable > 0.0)
        }
        8 => {
            let disposable = 2.0 * (salary + p.commission) / 3.0 - 5_000.0 * f64::from(elevel) - 20_000.0;
            group(disposable > 0.0)
        }
        9 => {
            let disposable =
                2.0 * (salary + p.commission) / 3.0 - 5_000.0 * f64::from(elevel) - loan / 5.0 - 10_000.0;
            group(disposable > 0.0)
        }
        10 => {
            let equity = if p.hyears >= 20 { p.hvalue * f64::from(p.hyears - 20) / 10.0 } else { 0.0 };
            let disposable =
                2.0 * (salary + p.commission) / 3.0 - 5_000.0 * f64::from(elevel) + equity / 5.0 - 10_000.0;
            group(disposable > 0.0)
        }
        _ => panic!("Agrawal function {function} outside 1..=10"),
    }
}

/// Draw one applicant, label it with `function`, and flip the label with
/// probability `flip_p`. The flip draw is always consumed so noisy and
/// noiseless streams with the same seed stay aligned.
pub fn agrawal_emit(rng: &mut StreamRng, function: u8, flip_p: f64) -> LabeledInstance {
    let applicant = Applicant::sample(rng);
    let mut label = agrawal_group(function, &applicant);
    if rng.random::<f64>() < flip_p {
        label = 1 - label;
    }
    LabeledInstance::new(applicant.values(), label)
}
