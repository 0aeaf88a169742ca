use sawell::extensions::{params_from_beta, params_from_omega, params_from_theta};
use sawell::{ExtensionParams, RootFindConfig};

use crate::cli::{ExtensionArgs, RootArgs};
use crate::error::CliError;

fn three(name: &str, v: &[f64]) -> Result<[f64; 3], CliError> {
    v.try_into()
        .map_err(|_| CliError::Input(format!("--{name} takes three comma-separated angles, got {}", v.len())))
}

/// Resolves exactly one extension source.
pub fn extension(args: &ExtensionArgs) -> Result<ExtensionParams, CliError> {
    let inline = [args.m0, args.m1, args.m2, args.m3];
    let sources = [
        args.input.is_some(),
        inline.iter().any(Option::is_some),
        args.theta.is_some(),
        args.beta.is_some(),
        args.omega.is_some(),
        args.textbook,
    ];
    match sources.iter().filter(|&&s| s).count() {
        0 => return Err(CliError::Input("no extension given (use --input, --m0..--m3, --theta, --beta, --omega or --textbook)".into())),
        1 => {}
        _ => return Err(CliError::Input("more than one extension source given".into())),
    }
    if let Some(path) = &args.input {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())));
    }
    if args.textbook {
        return Ok(ExtensionParams::textbook(args.a));
    }
    let psi = args.psi.ok_or_else(|| CliError::Input("--psi is required".into()))?;
    let p = if inline.iter().any(Option::is_some) {
        let m: Vec<f64> = inline
            .iter()
            .map(|v| v.ok_or_else(|| CliError::Input("all of --m0 --m1 --m2 --m3 are required".into())))
            .collect::<Result<_, _>>()?;
        ExtensionParams::new(psi, [m[0], m[1], m[2], m[3]], args.a)
    } else if let Some(t) = &args.theta {
        let [t0, t1, t2] = three("theta", t)?;
        params_from_theta(t0, t1, t2, psi, args.a)
    } else if let Some(w) = &args.omega {
        let [w0, w1, w2] = three("omega", w)?;
        params_from_omega(w0, w1, w2, psi, args.a)
    } else {
        let b = args.beta.as_deref().unwrap_or_default();
        if b.len() != 2 {
            return Err(CliError::Input(format!("--beta takes two comma-separated angles, got {}", b.len())));
        }
        let n = args.n.ok_or_else(|| CliError::Input("--beta needs --n".into()))?;
        params_from_beta(b[0], b[1], psi, n, args.a)
    };
    p.map_err(|e| CliError::Input(e.to_string()))
}

pub fn root_config(args: &RootArgs) -> Result<RootFindConfig, CliError> {
    let d = RootFindConfig::default();
    let cfg = RootFindConfig {
        s_max: args.s_max.unwrap_or(d.s_max),
        grid_step: args.grid_step.unwrap_or(d.grid_step),
        r_max: args.r_max.unwrap_or(d.r_max),
        ..d
    };
    cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(cfg)
}
