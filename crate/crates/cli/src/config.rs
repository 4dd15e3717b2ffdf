use std::path::PathBuf;

use paircorr_core::generators::first_primes;
use paircorr_core::{Error, IntegerFamily, Result, SGrid};
use serde::Serialize;

use crate::args::{Command, Format, GenKind, Opts};

/// Fully resolved and validated parameters of one invocation. Serialized as
/// the header of every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub dim: usize,
    pub n: usize,
    pub s_values: Vec<f64>,
    pub seed: u64,
    pub generator: GenKind,
    pub alpha: Vec<f64>,
    pub family: IntegerFamily,
    pub poly_coeffs: Vec<i64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub qmax: u64,
    pub rho: f64,
    pub trials: usize,
    pub grid_k: usize,
    pub gamma: f64,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Parses one alpha entry: a decimal literal, `sqrt<k>` or `phi`.
pub fn parse_alpha_token(tok: &str) -> Result<f64> {
    let tok = tok.trim();
    if tok == "phi" {
        return Ok((1.0 + 5f64.sqrt()) / 2.0);
    }
    if let Some(k) = tok.strip_prefix("sqrt") {
        let k: u64 = k
            .parse()
            .map_err(|_| invalid(format!("bad alpha token {tok:?}")))?;
        return Ok((k as f64).sqrt());
    }
    let v: f64 = tok
        .parse()
        .map_err(|_| invalid(format!("bad alpha value {tok:?}")))?;
    if !v.is_finite() {
        return Err(invalid(format!("alpha value {tok:?} is not finite")));
    }
    Ok(v)
}

fn parse_list<T>(text: &str, what: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(invalid(format!("empty entry in {what} list {text:?}")));
    }
    items.into_iter().map(parse).collect()
}

fn default_format(command: Command) -> Format {
    match command {
        Command::Generate | Command::Paircorr | Command::Converge => Format::Csv,
        Command::Energy | Command::Witness | Command::Approx | Command::Discrepancy => Format::Json,
    }
}

impl RunConfig {
    pub fn resolve(command: Command, opts: &Opts) -> Result<Self> {
        if opts.dim == 0 {
            return Err(invalid("--dim must be at least 1"));
        }
        if opts.n == 0 {
            return Err(invalid("--n must be at least 1"));
        }
        let s_values = parse_list(&opts.s_list, "s", |t| {
            t.parse::<f64>()
                .map_err(|_| invalid(format!("bad s value {t:?}")))
        })?;
        let s_values = SGrid::from_unsorted(s_values)?.values().to_vec();

        let alpha = match &opts.alpha {
            Some(text) => parse_list(text, "alpha", parse_alpha_token)?,
            None if command == Command::Witness || command == Command::Approx => {
                vec![2f64.sqrt(), 3f64.sqrt()]
            }
            None => first_primes(opts.dim)
                .into_iter()
                .map(|p| (p as f64).sqrt())
                .collect(),
        };
        let needs_alpha_dim = matches!(command, Command::Generate | Command::Paircorr | Command::Converge | Command::Discrepancy)
            && matches!(opts.generator, GenKind::Kronecker | GenKind::AnAlpha | GenKind::Poly)
            && opts.input.is_none();
        if needs_alpha_dim && alpha.len() != opts.dim {
            return Err(invalid(format!(
                "--alpha has {} entries but --dim is {}",
                alpha.len(),
                opts.dim
            )));
        }
        if command == Command::Witness && alpha.len() != 2 {
            return Err(invalid("witness needs exactly two alpha values"));
        }

        let family: IntegerFamily = opts.family.parse()?;
        if family == IntegerFamily::File && opts.input.is_none() {
            return Err(invalid("--family file needs --in"));
        }
        let poly_coeffs = parse_list(&opts.poly_coeffs, "polynomial coefficient", |t| {
            t.parse::<i64>()
                .map_err(|_| invalid(format!("bad polynomial coefficient {t:?}")))
        })?;

        if opts.trials == 0 {
            return Err(invalid("--trials must be at least 1"));
        }
        if opts.trials > 1
            && (command != Command::Paircorr || opts.generator != GenKind::Uniform || opts.input.is_some())
        {
            return Err(invalid("--trials > 1 applies to `paircorr --gen uniform` only"));
        }
        if opts.qmax == 0 {
            return Err(invalid("--qmax must be at least 1"));
        }
        if !(opts.rho > 0.0 && opts.rho.is_finite()) {
            return Err(invalid("--rho must be positive"));
        }
        if opts.grid_k < 2 {
            return Err(invalid("--grid-k must be at least 2"));
        }
        if !(opts.gamma >= 0.0 && opts.gamma.is_finite()) {
            return Err(invalid("--gamma must be non-negative"));
        }
        if command == Command::Converge && opts.n < 2 {
            return Err(invalid("converge needs --n of at least 2"));
        }
        let format = opts.format.unwrap_or(default_format(command));
        if command == Command::Witness && format == Format::Csv {
            return Err(invalid("witness output is JSON only"));
        }

        Ok(Self {
            command,
            dim: opts.dim,
            n: opts.n,
            s_values,
            seed: opts.seed,
            generator: opts.generator,
            alpha,
            family,
            poly_coeffs,
            input: opts.input.clone(),
            output: opts.out.clone(),
            format,
            qmax: opts.qmax,
            rho: opts.rho,
            trials: opts.trials,
            grid_k: opts.grid_k,
            gamma: opts.gamma,
        })
    }

    pub fn header_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_tokens() {
        assert_eq!(parse_alpha_token("sqrt2").unwrap(), std::f64::consts::SQRT_2);
        assert_eq!(parse_alpha_token("sqrt5").unwrap(), 5f64.sqrt());
        assert_eq!(parse_alpha_token("phi").unwrap(), (1.0 + 5f64.sqrt()) / 2.0);
        assert_eq!(parse_alpha_token(" 0.25 ").unwrap(), 0.25);
        assert_eq!(parse_alpha_token("1.125").unwrap(), 1.125);
        assert!(parse_alpha_token("sqrtx").is_err());
        assert!(parse_alpha_token("nan").is_err());
        assert!(parse_alpha_token("pi").is_err());
    }

    #[test]
    fn list_parsing() {
        assert!(parse_list("1,,2", "s", |t| Ok(t.to_string())).is_err());
        assert_eq!(parse_list("1, 2", "s", |t| Ok(t.to_string())).unwrap(), vec!["1", "2"]);
    }
}
