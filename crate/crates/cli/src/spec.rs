//! Inline command-line forms of baselines, systems, grids and vectors.
//!
//! ```text
//! exponential:2        weibull:2,0.8
//! series:2.2,3,5       X=parallel:2,3,5
//! log:0.001,20,2000    linear:0.01,5,1000
//! ```

use anyhow::{bail, Context, Result};
use poreli::{BaselineSpec, GridSpec, ParamVector, Spacing, Topology};

pub fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            let p = p.trim();
            p.parse::<f64>().with_context(|| format!("not a number: {p:?}"))
        })
        .collect()
}

pub fn counts(s: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.parse().with_context(|| format!("not a count: {a:?}"))?,
            b.parse().with_context(|| format!("not a count: {b:?}"))?,
        )),
        _ => bail!("expected two counts n1,n2 (got {s:?})"),
    }
}

fn split_kind(s: &str) -> Result<(&str, &str)> {
    s.split_once(':')
        .with_context(|| format!("expected KIND:VALUES (got {s:?})"))
}

pub fn baseline(s: &str) -> Result<BaselineSpec> {
    let (kind, rest) = split_kind(s)?;
    let v = numbers(rest)?;
    Ok(match (kind.to_ascii_lowercase().as_str(), v.as_slice()) {
        ("exponential" | "exp", [rate]) => BaselineSpec::exponential(*rate)?,
        ("weibull", [shape, scale]) => BaselineSpec::weibull(*shape, *scale)?,
        ("exponential" | "exp", _) => bail!("exponential takes one rate (got {s:?})"),
        ("weibull", _) => bail!("weibull takes shape,scale (got {s:?})"),
        _ => bail!("unknown baseline family {kind:?} (expected exponential or weibull)"),
    })
}

pub fn grid(s: &str) -> Result<GridSpec> {
    let (kind, rest) = split_kind(s)?;
    let spacing = match kind.to_ascii_lowercase().as_str() {
        "linear" => Spacing::Linear,
        "log" | "logarithmic" => Spacing::Logarithmic,
        _ => bail!("unknown grid spacing {kind:?} (expected linear or log)"),
    };
    let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
    let [lo, hi, n] = parts.as_slice() else {
        bail!("grid takes t_min,t_max,count (got {s:?})");
    };
    let count = n.parse().with_context(|| format!("not a count: {n:?}"))?;
    Ok(GridSpec::new(
        lo.parse().with_context(|| format!("not a number: {lo:?}"))?,
        hi.parse().with_context(|| format!("not a number: {hi:?}"))?,
        count,
        spacing,
    )?)
}

/// A system written inline, with an optional `NAME=` prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct InlineSystem {
    pub name: Option<String>,
    pub topology: Topology,
    pub params: ParamVector,
}

pub fn is_inline_system(s: &str) -> bool {
    s.contains(':')
}

pub fn system(s: &str) -> Result<InlineSystem> {
    let (name, body) = match s.split_once('=') {
        Some((n, b)) => {
            check_name(n)?;
            (Some(n.to_string()), b)
        }
        None => (None, s),
    };
    let (kind, rest) = split_kind(body)?;
    let topology = match kind.to_ascii_lowercase().as_str() {
        "series" => Topology::Series,
        "parallel" => Topology::Parallel,
        _ => bail!("unknown topology {kind:?} (expected series or parallel)"),
    };
    Ok(InlineSystem {
        name,
        topology,
        params: ParamVector::new(numbers(rest)?)?,
    })
}

/// Names appear in output file names.
pub fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        bail!("system names use letters, digits, '_' and '-' (got {name:?})");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baselines() {
        assert_eq!(
            baseline("exponential:2").unwrap(),
            BaselineSpec::exponential(2.0).unwrap()
        );
        assert_eq!(
            baseline("weibull:2,0.8").unwrap(),
            BaselineSpec::weibull(2.0, 0.8).unwrap()
        );
        assert!(baseline("weibull:2").is_err());
        assert!(baseline("gamma:2").is_err());
        assert!(baseline("exponential:-1").is_err());
        assert!(baseline("exponential").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(
            grid("linear:0.01,5,1000").unwrap(),
            GridSpec::linear(0.01, 5.0, 1000).unwrap()
        );
        assert_eq!(grid("log:0.001,20,2000").unwrap(), GridSpec::default());
        assert!(grid("log:0,20,10").is_err());
        assert!(grid("log:1,20").is_err());
    }

    #[test]
    fn systems() {
        let s = system("X=series:2.2,3,5").unwrap();
        assert_eq!(s.name.as_deref(), Some("X"));
        assert_eq!(s.topology, Topology::Series);
        assert_eq!(s.params.values(), &[2.2, 3.0, 5.0]);
        assert_eq!(system("parallel:1").unwrap().name, None);
        assert!(system("mixed:1,2").is_err());
        assert!(system("a b=series:1").is_err());
        assert!(system("series:1,0").is_err());
    }

    #[test]
    fn count_pairs() {
        assert_eq!(counts("2,4").unwrap(), (2, 4));
        assert!(counts("2").is_err());
        assert!(counts("2,x").is_err());
    }
}
