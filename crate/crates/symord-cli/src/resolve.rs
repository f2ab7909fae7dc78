//! Resolution of the `--algebra` argument: a path to an algebra file, or a
//! builtin name with optional parameters after a colon.

use anyhow::{bail, Context, Result};
use symord_core::algebra::load_algebra;
use symord_core::rat::parse_rat;
use symord_core::LieAlgebra;

/// Accepts `abelian:N`, `heisenberg`, `su2`, `kappa:a1,a2,..` or a file path.
/// A value naming an existing file always loads the file.
pub fn resolve_algebra(spec: &str) -> Result<LieAlgebra> {
    if std::path::Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
        return load_algebra(&text).with_context(|| format!("loading algebra from {spec}"));
    }
    let (name, params) = match spec.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (spec, None),
    };
    match name {
        "abelian" => {
            let n: usize = params
                .context("abelian needs a dimension, e.g. abelian:3")?
                .parse()
                .context("abelian dimension must be an integer")?;
            if n == 0 || n > 8 {
                bail!("abelian dimension must lie in 1..=8");
            }
            Ok(LieAlgebra::abelian(n))
        }
        "heisenberg" => Ok(LieAlgebra::heisenberg()),
        "su2" => Ok(LieAlgebra::su2()),
        "kappa" => {
            let params = params.context("kappa needs a coefficient vector, e.g. kappa:1,0,0")?;
            let a: Vec<_> = params
                .split(',')
                .map(|p| parse_rat(p).with_context(|| format!("invalid rational `{p}` in kappa vector")))
                .collect::<Result<_>>()?;
            if a.is_empty() || a.len() > 8 {
                bail!("kappa vector length must lie in 1..=8");
            }
            let n = a.len();
            LieAlgebra::kappa(n, &a).map_err(anyhow::Error::from)
        }
        other => bail!(
            "unknown algebra `{other}`: expected a file path or one of \
             abelian:N, heisenberg, su2, kappa:a1,a2,.."
        ),
    }
}
