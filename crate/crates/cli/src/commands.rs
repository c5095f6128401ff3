use bjscc::bounds::{
    baseline_bound, bsc_bound, hybrid_bound, theorem1_bound, theorem2_wz_bound, SchemeDescriptor,
    SchemeKind,
};
use bjscc::rate_search::rate_curve;
use bjscc::sim::{simulate_scheme, simulate_wz_scheme, RunConfig, TrialBatchResult};

use crate::config::{bsc_instance, Instance, Loaded};
use crate::error::CliError;

/// Header row plus data rows, all already formatted.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Set when a simulated row missed its bound.
    pub failures: usize,
}

fn f(x: f64) -> String {
    format!("{x}")
}

fn scheme_cols(sd: &SchemeDescriptor) -> [String; 4] {
    [
        sd.kind().as_str().to_owned(),
        sd.k().to_string(),
        sd.groups().to_string(),
        sd.group_size().to_string(),
    ]
}

pub fn bound(cfg: &Loaded) -> Result<Table, CliError> {
    let spec = cfg.instance_spec()?;
    let label = spec.label();
    let mut rows = Vec::new();
    match cfg.instance()? {
        Instance::Bsc { n, delta, m, k } => {
            for sd in cfg.schemes(k)? {
                let b = bsc_bound(&sd, n, delta, m)?;
                let [s, k, j, l] = scheme_cols(&sd);
                rows.push(vec![label.into(), s, k, j, l, f(m), f(b)]);
            }
        }
        Instance::Jscc(inst) => {
            for sd in cfg.schemes(inst.k)? {
                let b = match sd.kind() {
                    SchemeKind::Disjoint => theorem1_bound(&inst)?,
                    SchemeKind::Baseline => baseline_bound(&inst)?,
                    SchemeKind::Hybrid => hybrid_bound(&inst, &sd)?,
                };
                let [s, k, j, l] = scheme_cols(&sd);
                rows.push(vec![
                    label.into(),
                    s,
                    k,
                    j,
                    l,
                    inst.p_w.len().to_string(),
                    f(b),
                ]);
            }
        }
        Instance::Wz(inst) => {
            let b = theorem2_wz_bound(&inst)?;
            let k = inst.k.to_string();
            rows.push(vec![
                label.into(),
                label.into(),
                k.clone(),
                k,
                "1".into(),
                inst.p_w.len().to_string(),
                f(b),
            ]);
        }
    }
    Ok(Table {
        header: vec!["instance", "scheme", "k", "j", "l", "m", "bound"],
        rows,
        failures: 0,
    })
}

pub fn simulate(cfg: &Loaded, seed: u64) -> Result<Table, CliError> {
    let sim = cfg.simulate()?;
    let run = RunConfig {
        trials: sim.trials,
        seed,
        workers: cfg.config.workers,
    };
    let mut rows = Vec::new();
    let mut failures = 0;
    let mut push = |cols: [String; 4], r: TrialBatchResult, bound: f64| {
        let pass = r.within(bound, sim.sigmas);
        failures += usize::from(!pass);
        let [s, k, j, l] = cols;
        rows.push(vec![
            s,
            sim.backend.as_str().into(),
            k,
            j,
            l,
            r.trials.to_string(),
            r.errors.to_string(),
            f(r.p_hat()),
            f(r.stderr()),
            f(bound),
            pass.to_string(),
            seed.to_string(),
            r.ties.to_string(),
        ]);
    };
    match cfg.instance()? {
        Instance::Bsc { n, delta, m, k } => {
            let inst = bsc_instance(n, delta, m, k).map_err(|e| cfg.err("instance", "m", e))?;
            for sd in cfg.schemes(k)? {
                let r = simulate_scheme(&inst, &sd, sim.backend, &run)?;
                push(scheme_cols(&sd), r, bsc_bound(&sd, n, delta, m)?);
            }
        }
        Instance::Jscc(inst) => {
            for sd in cfg.schemes(inst.k)? {
                let r = simulate_scheme(&inst, &sd, sim.backend, &run)?;
                push(scheme_cols(&sd), r, hybrid_bound(&inst, &sd)?);
            }
        }
        Instance::Wz(inst) => {
            let r = simulate_wz_scheme(&inst, sim.backend, &run)?;
            let k = inst.k.to_string();
            let cols = ["wyner_ziv".into(), k.clone(), k, "1".into()];
            push(cols, r, theorem2_wz_bound(&inst)?);
        }
    }
    Ok(Table {
        header: vec![
            "scheme", "backend", "k", "j", "l", "trials", "errors", "p_hat", "stderr", "bound",
            "pass", "seed", "ties",
        ],
        rows,
        failures,
    })
}

pub fn rate_curve_table(cfg: &Loaded) -> Result<Table, CliError> {
    let spec = cfg.rate_curve()?;
    let points = rate_curve(&spec.n, spec.delta, spec.eps, &spec.k)?;
    let rows = points
        .iter()
        .map(|p| {
            vec![
                p.scheme.as_str().into(),
                p.n.to_string(),
                f(p.delta),
                f(p.eps),
                p.k.to_string(),
                p.j_opt.to_string(),
                f(p.rate),
            ]
        })
        .collect();
    Ok(Table {
        header: vec!["scheme", "n", "delta", "eps", "K", "J_opt", "rate"],
        rows,
        failures: 0,
    })
}

/// Companion matplotlib script; takes the CSV path as its argument.
pub fn plot_script(default_csv: &str) -> String {
    format!(
        r##"import sys

import matplotlib.pyplot as plt
import pandas as pd

path = sys.argv[1] if len(sys.argv) > 1 else "{default_csv}"
df = pd.read_csv(path, comment="#")
styles = {{"disjoint": "o-", "baseline": "s--", "hybrid": "^-"}}
fig, ax = plt.subplots()
for (scheme, n), g in df.groupby(["scheme", "n"]):
    ax.plot(g["K"], g["rate"], styles.get(scheme, "-"), label=f"{{scheme}}, n={{n}}")
ax.set_xscale("log", base=2)
ax.set_xlabel("K")
ax.set_ylabel("rate (bits per channel use)")
ax.legend()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
"##
    )
}
