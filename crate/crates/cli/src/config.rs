use std::path::PathBuf;

use clap::{Args, ValueEnum};
use moyal::grid::GridSpec;
use moyal::models::{DampedParams, HeliumParams, Oscillator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Harmonic,
    Helium,
    Damped,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Harmonic => "harmonic",
            Model::Helium => "helium",
            Model::Damped => "damped",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "damped")]
    pub model: Model,
    /// Quantum number (harmonic, damped).
    #[arg(long)]
    pub n: Option<u32>,
    /// u-sector quantum number (helium).
    #[arg(long)]
    pub nu: Option<u32>,
    /// v-sector quantum number (helium).
    #[arg(long)]
    pub nv: Option<u32>,
    /// Dissipation λ, |λ| < 1 (damped).
    #[arg(long = "lambda", allow_negative_numbers = true)]
    pub lam: Option<f64>,
    /// Hooke coupling ξ in [0, 1) (helium).
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long, default_value_t = -6.0, allow_negative_numbers = true)]
    pub qmin: f64,
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub qmax: f64,
    #[arg(long, default_value_t = -6.0, allow_negative_numbers = true)]
    pub pmin: f64,
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub pmax: f64,
    #[arg(long, default_value_t = 201)]
    pub nq: usize,
    #[arg(long, default_value_t = 201)]
    pub np: usize,
}

impl GridArgs {
    pub fn spec(&self) -> Result<GridSpec, String> {
        GridSpec::new(self.qmin, self.qmax, self.pmin, self.pmax, self.nq, self.np)
            .map_err(|e| e.to_string())
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; taken from the file extension when absent.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl OutputArgs {
    pub fn format_or(&self, default: Format) -> Format {
        if let Some(f) = self.format {
            return f;
        }
        let ext = self
            .out
            .as_ref()
            .and_then(|p| p.extension())
            .and_then(|e| e.to_str());
        match ext.map(str::to_ascii_lowercase).as_deref() {
            Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            _ => default,
        }
    }
}

/// Validated model selection.
#[derive(Clone, Debug)]
pub enum ModelConfig {
    Harmonic {
        osc: Oscillator,
        n: u32,
    },
    Helium {
        params: HeliumParams,
        nu: u32,
        nv: u32,
    },
    Damped {
        lam: f64,
        n: u32,
    },
}

impl ModelArgs {
    /// Checks that only parameters meaningful for the model were given.
    pub fn resolve(&self) -> Result<ModelConfig, String> {
        let reject = |flag: &str, given: bool| -> Result<(), String> {
            if given {
                Err(format!(
                    "--{flag} does not apply to model {}",
                    self.model.name()
                ))
            } else {
                Ok(())
            }
        };
        let mass = self.mass.unwrap_or(1.0);
        let omega = self.omega.unwrap_or(1.0);
        let hbar = self.hbar.unwrap_or(1.0);
        match self.model {
            Model::Harmonic => {
                reject("lambda", self.lam.is_some())?;
                reject("xi", self.xi.is_some())?;
                reject("nu", self.nu.is_some())?;
                reject("nv", self.nv.is_some())?;
                let osc = Oscillator::new(mass, omega, hbar).map_err(|e| e.to_string())?;
                Ok(ModelConfig::Harmonic {
                    osc,
                    n: self.n.unwrap_or(0),
                })
            }
            Model::Helium => {
                reject("lambda", self.lam.is_some())?;
                reject("n", self.n.is_some())?;
                let params = HeliumParams::new(mass, omega, self.xi.unwrap_or(0.0), hbar)
                    .map_err(|e| e.to_string())?;
                Ok(ModelConfig::Helium {
                    params,
                    nu: self.nu.unwrap_or(0),
                    nv: self.nv.unwrap_or(0),
                })
            }
            Model::Damped => {
                reject("xi", self.xi.is_some())?;
                reject("nu", self.nu.is_some())?;
                reject("nv", self.nv.is_some())?;
                // the damped model is written in units with m = ω = ħ = 1
                reject("mass", self.mass.is_some())?;
                reject("omega", self.omega.is_some())?;
                reject("hbar", self.hbar.is_some())?;
                let lam = self.lam.unwrap_or(0.0);
                let n = self.n.unwrap_or(0);
                DampedParams::new(lam, n).map_err(|e| e.to_string())?;
                Ok(ModelConfig::Damped { lam, n })
            }
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl ModelConfig {
    pub fn header(&self) -> Vec<(String, String)> {
        let mut h: Vec<(String, String)> = Vec::new();
        match self {
            ModelConfig::Harmonic { osc, n } => {
                h.push(("model".into(), "harmonic".into()));
                h.push(("n".into(), n.to_string()));
                h.push(("mass".into(), num(osc.mass)));
                h.push(("omega".into(), num(osc.omega)));
            }
            ModelConfig::Helium { params, nu, nv } => {
                h.push(("model".into(), "helium".into()));
                h.push(("nu".into(), nu.to_string()));
                h.push(("nv".into(), nv.to_string()));
                h.push(("xi".into(), num(params.xi)));
                h.push(("mass".into(), num(params.mass)));
                h.push(("omega".into(), num(params.omega)));
            }
            ModelConfig::Damped { lam, n } => {
                h.push(("model".into(), "damped".into()));
                h.push(("n".into(), n.to_string()));
                h.push(("lambda".into(), num(*lam)));
            }
        }
        h.push((
            "normalization".into(),
            "integral of W over phase space = 1".into(),
        ));
        h
    }
}
