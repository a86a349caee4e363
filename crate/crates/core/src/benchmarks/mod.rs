//! Benchmark registry: classical F1–F23 and CEC2019 CEC01–CEC10.

pub mod cec2019;
mod classical;

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use cec2019::{load_cec_data, CecData};

use crate::domain::{Bounds, Objective};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Environment variable overriding the CEC data directory.
pub const CEC_DATA_ENV: &str = "WOA_BALANCE_CEC_DATA";

/// Dimension of every scalable classical function.
pub const SCALABLE_DIMS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Unimodal,
    Multimodal,
    FixedDimensionMultimodal,
    Composite,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Unimodal => "unimodal",
            Family::Multimodal => "multimodal",
            Family::FixedDimensionMultimodal => "fixed-dimension-multimodal",
            Family::Composite => "composite",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Classical,
    Cec2019,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    pub id: String,
    pub suite: Suite,
    pub family: Family,
    pub bounds: Bounds,
    pub default_dims: usize,
    pub known_optimum: Option<f64>,
    /// A point where `known_optimum` is attained, when one is known exactly
    /// enough to reproduce the optimum to 1e-8.
    pub optimum_location: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Classical(u8),
    Cec(u8),
}

/// A registered benchmark, usable as an [`Objective`].
#[derive(Debug, Clone)]
pub struct Benchmark {
    spec: FunctionSpec,
    kind: Kind,
    data: Option<cec2019::ShiftRotation>,
}

impl Benchmark {
    pub fn spec(&self) -> &FunctionSpec {
        &self.spec
    }

    pub fn id(&self) -> &str {
        &self.spec.id
    }

    /// Dimension-checked evaluation.
    pub fn evaluate_checked(&self, x: &[f64], noise: &mut RngStream) -> Result<f64> {
        if x.len() != self.spec.default_dims {
            return Err(Error::DimensionMismatch {
                expected: self.spec.default_dims,
                actual: x.len(),
            });
        }
        Ok(self.evaluate(x, noise))
    }

    pub fn is_noisy(&self) -> bool {
        self.kind == Kind::Classical(7)
    }
}

impl Objective for Benchmark {
    fn name(&self) -> &str {
        &self.spec.id
    }

    fn bounds(&self) -> &Bounds {
        &self.spec.bounds
    }

    fn evaluate(&self, x: &[f64], noise: &mut RngStream) -> f64 {
        match self.kind {
            Kind::Classical(k) => classical::evaluate(k, x, noise),
            Kind::Cec(k) => cec2019::evaluate(k, x, self.data.as_ref()),
        }
    }

    fn known_optimum(&self) -> Option<f64> {
        self.spec.known_optimum
    }
}

fn uniform(low: f64, high: f64, dims: usize) -> Bounds {
    Bounds::uniform(low, high, dims).expect("static bounds are valid")
}

// Optimizer locations of the fixed-dimension functions were refined
// numerically (Nelder-Mead followed by BFGS) and the optima are the function
// values at those points.
const F8_ARGMIN: f64 = 420.968_746_038_928_66;
const F8_MIN_PER_DIM: f64 = -418.982_887_272_433_74;

fn classical_spec(k: u8) -> FunctionSpec {
    let n = SCALABLE_DIMS;
    let (family, bounds, optimum, location): (Family, Bounds, f64, Option<Vec<f64>>) = match k {
        1..=4 => (
            Family::Unimodal,
            uniform(-100.0, 100.0, n),
            0.0,
            Some(vec![0.0; n]),
        ),
        5 => (
            Family::Unimodal,
            uniform(-30.0, 30.0, n),
            0.0,
            Some(vec![1.0; n]),
        ),
        6 => (
            Family::Unimodal,
            uniform(-100.0, 100.0, n),
            0.0,
            Some(vec![-0.5; n]),
        ),
        7 => (Family::Unimodal, uniform(-1.28, 1.28, n), 0.0, None),
        8 => (
            Family::Multimodal,
            uniform(-500.0, 500.0, n),
            F8_MIN_PER_DIM * n as f64,
            Some(vec![F8_ARGMIN; n]),
        ),
        9 => (
            Family::Multimodal,
            uniform(-5.12, 5.12, n),
            0.0,
            Some(vec![0.0; n]),
        ),
        10 => (
            Family::Multimodal,
            uniform(-32.0, 32.0, n),
            0.0,
            Some(vec![0.0; n]),
        ),
        11 => (
            Family::Multimodal,
            uniform(-600.0, 600.0, n),
            0.0,
            Some(vec![0.0; n]),
        ),
        12 => (
            Family::Multimodal,
            uniform(-50.0, 50.0, n),
            0.0,
            Some(vec![-1.0; n]),
        ),
        13 => (
            Family::Multimodal,
            uniform(-50.0, 50.0, n),
            0.0,
            Some(vec![1.0; n]),
        ),
        14 => (
            Family::FixedDimensionMultimodal,
            uniform(-65.536, 65.536, 2),
            0.998_003_837_794_449_8,
            Some(vec![-31.978_336_496_388_785, -31.978_337_208_775_798]),
        ),
        15 => (
            Family::FixedDimensionMultimodal,
            uniform(-5.0, 5.0, 4),
            0.000_307_485_987_805_605_1,
            Some(vec![
                0.192_833_453_042_748_13,
                0.190_836_240_275_970_35,
                0.123_117_299_075_980_03,
                0.135_765_990_339_844_66,
            ]),
        ),
        16 => (
            Family::FixedDimensionMultimodal,
            uniform(-5.0, 5.0, 2),
            -1.031_628_453_489_877_6,
            Some(vec![0.089_842_016_529_270_98, -0.712_656_401_380_720_2]),
        ),
        17 => (
            Family::FixedDimensionMultimodal,
            Bounds::new(vec![-5.0, 0.0], vec![10.0, 15.0]).expect("static bounds are valid"),
            0.397_887_357_729_738_16,
            Some(vec![std::f64::consts::PI, 2.275]),
        ),
        18 => (
            Family::FixedDimensionMultimodal,
            uniform(-2.0, 2.0, 2),
            3.0,
            Some(vec![0.0, -1.0]),
        ),
        19 => (
            Family::FixedDimensionMultimodal,
            uniform(0.0, 1.0, 3),
            -3.862_782_147_820_755_4,
            Some(vec![
                0.114_614_327_869_381_44,
                0.555_648_849_854_593_4,
                0.852_546_952_926_669_5,
            ]),
        ),
        20 => (
            Family::FixedDimensionMultimodal,
            uniform(0.0, 1.0, 6),
            -3.321_995_171_584_242_6,
            Some(vec![
                0.201_707_620_446_730_57,
                0.146_780_942_226_308_9,
                0.476_744_850_861_760_5,
                0.275_342_390_950_817_75,
                0.311_651_873_968_761_5,
                0.657_275_165_730_518_7,
            ]),
        ),
        21 => (
            Family::FixedDimensionMultimodal,
            uniform(0.0, 10.0, 4),
            -10.153_199_679_058_229,
            Some(vec![
                4.000_037_152_376_549,
                4.000_133_278_657_566,
                4.000_037_151_057_555,
                4.000_133_277_090_425,
            ]),
        ),
        22 => (
            Family::FixedDimensionMultimodal,
            uniform(0.0, 10.0, 4),
            -10.402_940_566_818_664,
            Some(vec![
                4.000_572_914_267_843,
                4.000_689_365_862_991,
                3.999_489_710_414_378,
                3.999_606_160_387_538,
            ]),
        ),
        23 => (
            Family::FixedDimensionMultimodal,
            uniform(0.0, 10.0, 4),
            -10.536_409_816_692_046,
            Some(vec![
                4.000_746_533_201_553,
                4.000_592_934_538_832,
                3.999_663_397_220_255_8,
                3.999_509_801_285_225_5,
            ]),
        ),
        _ => unreachable!("classical function {k}"),
    };
    FunctionSpec {
        id: format!("F{k}"),
        suite: Suite::Classical,
        family,
        default_dims: bounds.dims(),
        bounds,
        known_optimum: Some(optimum),
        optimum_location: location,
    }
}

fn cec_spec(k: u8, data: Option<&cec2019::ShiftRotation>) -> FunctionSpec {
    let (bounds, location) = match k {
        1 => (
            uniform(-8192.0, 8192.0, 9),
            Some(cec2019::CHEBYSHEV_T8.to_vec()),
        ),
        2 => (
            uniform(-16384.0, 16384.0, 16),
            Some(cec2019::INVERSE_HILBERT_4.to_vec()),
        ),
        3 => (uniform(-4.0, 4.0, 18), None),
        _ => (
            uniform(-100.0, 100.0, cec2019::ROTATED_DIMS),
            data.map(|d| d.shift.clone()),
        ),
    };
    FunctionSpec {
        id: format!("CEC{k:02}"),
        suite: Suite::Cec2019,
        family: Family::Composite,
        default_dims: bounds.dims(),
        bounds,
        known_optimum: Some(1.0),
        optimum_location: location,
    }
}

/// Metadata of all 33 functions; needs no data files. CEC04–CEC10 carry no
/// optimum location here since it lives in the shift data.
pub fn function_specs() -> Vec<FunctionSpec> {
    (1..=23)
        .map(classical_spec)
        .chain((1..=10).map(|k| cec_spec(k, None)))
        .collect()
}

/// The directory holding the bundled CEC2019 data, unless overridden through
/// [`CEC_DATA_ENV`].
pub fn default_cec_data_dir() -> PathBuf {
    std::env::var_os(CEC_DATA_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data/cec2019"))
}

/// All 33 benchmarks, ready to evaluate.
#[derive(Debug, Clone)]
pub struct Registry {
    benchmarks: Vec<Benchmark>,
}

impl Registry {
    pub fn load(cec_dir: &Path) -> Result<Self> {
        let data = load_cec_data(cec_dir)?;
        Ok(Self::with_data(&data))
    }

    pub fn with_data(data: &CecData) -> Self {
        let classical = (1..=23).map(|k| Benchmark {
            spec: classical_spec(k),
            kind: Kind::Classical(k),
            data: None,
        });
        let cec = (1..=10).map(|k| {
            let d = data.get(k).cloned();
            Benchmark {
                spec: cec_spec(k, d.as_ref()),
                kind: Kind::Cec(k),
                data: d,
            }
        });
        Self {
            benchmarks: classical.chain(cec).collect(),
        }
    }

    pub fn benchmarks(&self) -> &[Benchmark] {
        &self.benchmarks
    }

    pub fn specs(&self) -> impl Iterator<Item = &FunctionSpec> {
        self.benchmarks.iter().map(|b| &b.spec)
    }

    pub fn suite(&self, suite: Suite) -> impl Iterator<Item = &Benchmark> {
        self.benchmarks
            .iter()
            .filter(move |b| b.spec.suite == suite)
    }

    /// Looks up an id such as `F7`, `CEC03` or `cec3`.
    pub fn get(&self, id: &str) -> Result<&Benchmark> {
        let canonical = canonical_id(id).ok_or_else(|| Error::UnknownFunction(id.to_string()))?;
        self.benchmarks
            .iter()
            .find(|b| b.spec.id == canonical)
            .ok_or_else(|| Error::UnknownFunction(id.to_string()))
    }

    pub fn evaluate(&self, id: &str, x: &[f64], noise: &mut RngStream) -> Result<f64> {
        self.get(id)?.evaluate_checked(x, noise)
    }
}

/// Normalizes `f7`, `F07`, `cec3`, `Cec03` to `F7` / `CEC03`.
pub fn canonical_id(id: &str) -> Option<String> {
    let upper = id.trim().to_ascii_uppercase();
    let (prefix, digits) = if let Some(rest) = upper.strip_prefix("CEC") {
        ("CEC", rest)
    } else if let Some(rest) = upper.strip_prefix('F') {
        ("F", rest)
    } else {
        return None;
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let k: u32 = digits.parse().ok()?;
    match prefix {
        "F" if (1..=23).contains(&k) => Some(format!("F{k}")),
        "CEC" if (1..=10).contains(&k) => Some(format!("CEC{k:02}")),
        _ => None,
    }
}

static DEFAULT_REGISTRY: OnceLock<Registry> = OnceLock::new();

/// The registry backed by [`default_cec_data_dir`], loaded once per process.
pub fn registry() -> Result<&'static Registry> {
    if let Some(r) = DEFAULT_REGISTRY.get() {
        return Ok(r);
    }
    let loaded = Registry::load(&default_cec_data_dir())?;
    Ok(DEFAULT_REGISTRY.get_or_init(|| loaded))
}
