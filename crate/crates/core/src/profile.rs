//! Scalar functions of one variable given by a short text form:
//! `const:V`, `poly:a0,a1,...` (ascending powers) or
//! `sin:amp,freq,phase,offset` for `amp·sin(freq·t + phase) + offset`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Const(f64),
    Poly(Vec<f64>),
    Sin { amp: f64, freq: f64, phase: f64, offset: f64 },
}

impl Profile {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Profile::Const(v) => *v,
            Profile::Poly(a) => a.iter().rev().fold(0.0, |acc, c| acc * t + c),
            Profile::Sin { amp, freq, phase, offset } => amp * (freq * t + phase).sin() + offset,
        }
    }

    /// The `k`-th derivative at `t`.
    pub fn derivative(&self, k: u32, t: f64) -> f64 {
        if k == 0 {
            return self.eval(t);
        }
        match self {
            Profile::Const(_) => 0.0,
            Profile::Poly(a) => {
                let d: Vec<f64> = a
                    .iter()
                    .enumerate()
                    .skip(k as usize)
                    .map(|(i, c)| c * ((i + 1 - k as usize)..=i).map(|m| m as f64).product::<f64>())
                    .collect();
                Profile::Poly(d).eval(t)
            }
            Profile::Sin { amp, freq, phase, .. } => {
                let arg = freq * t + phase + k as f64 * std::f64::consts::FRAC_PI_2;
                amp * freq.powi(k as i32) * arg.sin()
            }
        }
    }
}

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {x:?}"))))
        .collect()
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| Error::Parse(format!("expected kind:values, got {s:?}")))?;
        let v = numbers(rest)?;
        match (kind, v.as_slice()) {
            ("const", [x]) => Ok(Profile::Const(*x)),
            ("poly", a) if !a.is_empty() => Ok(Profile::Poly(a.to_vec())),
            ("sin", [amp, freq, phase, offset]) => {
                Ok(Profile::Sin { amp: *amp, freq: *freq, phase: *phase, offset: *offset })
            }
            _ => Err(Error::Parse(format!("bad profile {s:?}; use const:V, poly:a0,a1,... or sin:amp,freq,phase,offset"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Const(v) => write!(f, "const:{v}"),
            Profile::Poly(a) => {
                let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            Profile::Sin { amp, freq, phase, offset } => write!(f, "sin:{amp},{freq},{phase},{offset}"),
        }
    }
}
