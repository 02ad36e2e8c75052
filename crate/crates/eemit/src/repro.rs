//! Reproduction presets, one per figure panel (numbered in order of appearance).
//!
//! Run lengths are desk-scale: single runs record 2e6 steps, 1-D scans 5e5 steps
//! per point, 2-D maps and basins use coarse grids. Override anything with
//! `--set key=value`.

use crate::run::Command;

pub struct Preset {
    pub id: &'static str,
    pub title: &'static str,
    pub command: Command,
    pub config: String,
}

const LIENARD: &str = "kind=L1\nalpha=0.45\nbeta=0.5\ngamma=0.5\nf1=0.2\nomega1=0.7315\n";
const LIENARD2: &str =
    "kind=L2\nalpha=0.45\nbeta=0.5\ngamma=0.5\nf1=0.2\nomega1=0.7315\nomega2=1.0\n";
const MECH: &str = "kind=NP1\nalpha=0.2\nlambda=0.5\nomega0_sq=0.25\nf1=3.1665\nomega1=1.0\n";
// the second-forcing frequency is read as 5.99865 (the only non-default constant given)
const MECH2: &str =
    "kind=NP2\nalpha=0.2\nlambda=0.5\nomega0_sq=0.25\nf1=3.1665\nomega1=1.0\nomega2=5.99865\n";
const PARAM: &str = "kind=NP3\nalpha=0.2\nlambda=0.5\nomega0_sq=0.25\nOmega0_sq=6.7\nepsilon=0.081\nomega_p=1.0\nomega1=1.0\nomega2=5.99865\n";
const MULTI: &str =
    "kind=LM\nalpha=0.0135\nbeta=0.8111\ngamma=-2.65\nf1=2.0\nomega1=0.762\nomega2=1.0\n";
const MULTI_EE: &str =
    "kind=LM\nalpha=0.45\nbeta=0.5\ngamma=-0.5\nf1=0.2\nomega1=0.7315\nomega2=1.0\n";

fn axis(prefix: &str, param: &str, lo: f64, hi: f64, points: usize) -> String {
    format!(
        "{prefix}.param={param}\n{prefix}.lo={lo}\n{prefix}.hi={hi}\n{prefix}.points={points}\n"
    )
}

fn p(id: &'static str, title: &'static str, command: Command, parts: &[&str]) -> Preset {
    Preset {
        id,
        title,
        command,
        config: parts.concat(),
    }
}

pub fn presets() -> Vec<Preset> {
    use Command::*;
    let bias_l = axis("scan", "A", 0.0, 0.001, 21);
    let bias_m = axis("scan", "A", 0.0, 0.1, 51);
    let f2_l = axis("scan", "f2", 0.0, 0.001, 21);
    let f2_m = axis("scan", "f2", 0.0, 1.5, 76);
    let f1_l = axis("scan", "f1", 0.15, 0.25, 11);
    let f1_m = axis("scan", "f1", 2.8, 3.5, 11);
    let bias_l2 = axis("scan2", "A", 0.0, 0.001, 11);
    let bias_m2 = axis("scan2", "A", 0.0, 0.1, 11);
    let f2_l2 = axis("scan2", "f2", 0.0, 0.001, 11);
    let f2_m2 = axis("scan2", "f2", 0.0, 1.5, 11);
    let phi = axis("scan2", "phi", 0.0, std::f64::consts::PI, 9);
    let f2_m16 = axis("scan", "f2", 0.0, 1.5, 16);
    let omega = axis("scan", "omega1", 0.70, 0.80, 51);
    let bias_lm = axis("scan", "A", 0.0, 2.0, 41);
    let f2_lm = axis("scan", "f2", 0.0, 1.0, 41);
    let two_ics = "ics=1.8,1.6;1.67,-2.02\nscan.mle=true\nmle.steps=300000\nrecord=200000\n";
    let two_ics_ee = "ics=0.5,0.5;1.67,-2.02\nscan.mle=true\nmle.steps=300000\nrecord=200000\n";
    let basin = "omega1=0.758\nbasin.nx=50\nbasin.ny=50\nmle.steps=300000\n";
    let multi_basin = MULTI.replace("omega1=0.762\n", "");
    let multi_basin = multi_basin.as_str();

    vec![
        p(
            "fig1a",
            "Lienard, A=0: time series statistics and peak PDF",
            Stats,
            &[LIENARD, "A=0\n"],
        ),
        p(
            "fig1b",
            "Lienard, A=0.0001",
            Stats,
            &[LIENARD, "A=0.0001\n"],
        ),
        p("fig1c", "Lienard, A=0.001", Stats, &[LIENARD, "A=0.001\n"]),
        p(
            "fig2a",
            "Lienard: bifurcation diagram in A",
            Bifurcate,
            &[LIENARD, &bias_l],
        ),
        p(
            "fig2b",
            "Lienard: EE probability vs A",
            Scan1d,
            &[LIENARD, &bias_l],
        ),
        p("fig2c", "Lienard: d_max vs A", Scan1d, &[LIENARD, &bias_l]),
        p("fig3a", "Mechanical, A=0", Stats, &[MECH, "A=0\n"]),
        p("fig3b", "Mechanical, A=0.01", Stats, &[MECH, "A=0.01\n"]),
        p("fig3c", "Mechanical, A=0.02", Stats, &[MECH, "A=0.02\n"]),
        p(
            "fig4a",
            "Mechanical: bifurcation diagram in A",
            Bifurcate,
            &[MECH, &bias_m],
        ),
        p(
            "fig4b",
            "Mechanical: EE probability vs A",
            Scan1d,
            &[MECH, &bias_m],
        ),
        p("fig4c", "Mechanical: d_max vs A", Scan1d, &[MECH, &bias_m]),
        p(
            "fig5a",
            "Lienard: probability in the f1-A plane",
            Scan2d,
            &[LIENARD, &f1_l, &bias_l2],
        ),
        p(
            "fig5b",
            "Mechanical: probability in the f1-A plane",
            Scan2d,
            &[MECH, &f1_m, &bias_m2],
        ),
        p("fig6a", "Lienard, f2=0", Stats, &[LIENARD2, "f2=0\n"]),
        p(
            "fig6b",
            "Lienard, f2=0.0001",
            Stats,
            &[LIENARD2, "f2=0.0001\n"],
        ),
        p(
            "fig6c",
            "Lienard, f2=0.001",
            Stats,
            &[LIENARD2, "f2=0.001\n"],
        ),
        p(
            "fig7a",
            "Lienard: EE probability vs f2",
            Scan1d,
            &[LIENARD2, &f2_l],
        ),
        p("fig7b", "Lienard: d_max vs f2", Scan1d, &[LIENARD2, &f2_l]),
        p(
            "fig7c",
            "Lienard, f2=0.0001: phase portrait",
            Simulate,
            &[LIENARD2, "f2=0.0001\nrecord=200000\n"],
        ),
        p(
            "fig7d",
            "Lienard, f2=0.00022: phase portrait",
            Simulate,
            &[LIENARD2, "f2=0.00022\nrecord=200000\n"],
        ),
        p(
            "fig7e",
            "Lienard, f2=0.0009: phase portrait",
            Simulate,
            &[LIENARD2, "f2=0.0009\nrecord=200000\n"],
        ),
        p("fig8a", "Mechanical, f2=0", Stats, &[MECH2, "f2=0\n"]),
        p("fig8b", "Mechanical, f2=0.04", Stats, &[MECH2, "f2=0.04\n"]),
        p("fig8c", "Mechanical, f2=0.8", Stats, &[MECH2, "f2=0.8\n"]),
        p(
            "fig9a",
            "Mechanical: EE probability vs f2",
            Scan1d,
            &[MECH2, &f2_m],
        ),
        p("fig9b", "Mechanical: d_max vs f2", Scan1d, &[MECH2, &f2_m]),
        p(
            "fig9c",
            "Mechanical, f2=0.02: phase portrait",
            Simulate,
            &[MECH2, "f2=0.02\nrecord=200000\n"],
        ),
        p(
            "fig9d",
            "Mechanical, f2=0.5: phase portrait",
            Simulate,
            &[MECH2, "f2=0.5\nrecord=200000\n"],
        ),
        p(
            "fig9e",
            "Mechanical, f2=1.42: phase portrait",
            Simulate,
            &[MECH2, "f2=1.42\nrecord=200000\n"],
        ),
        p(
            "fig10a",
            "Lienard: probability in the f1-f2 plane",
            Scan2d,
            &[LIENARD2, &f1_l, &f2_l2],
        ),
        p(
            "fig10b",
            "Mechanical: probability in the f1-f2 plane",
            Scan2d,
            &[MECH2, &f1_m, &f2_m2],
        ),
        p(
            "fig11",
            "Mechanical: probability over f2 and the second-forcing phase",
            Scan2d,
            &[MECH2, &f2_m16, &phi],
        ),
        p(
            "fig12a",
            "Lienard, A=0.0001: probability vs f2",
            Scan1d,
            &[LIENARD2, "A=0.0001\n", &f2_l],
        ),
        p(
            "fig12b",
            "Mechanical, A=0.06: probability vs f2",
            Scan1d,
            &[MECH2, "A=0.06\n", &f2_m],
        ),
        p(
            "fig13a",
            "Parametric, f1=f2=0: probability vs A",
            Scan1d,
            &[PARAM, "f1=0\nf2=0\n", &bias_m],
        ),
        p(
            "fig13b",
            "Parametric, A=0, f1=0.5: probability vs f2",
            Scan1d,
            &[PARAM, "f1=0.5\n", &f2_m],
        ),
        p(
            "fig13c",
            "Parametric, f1=0.5, f2=0.1: probability vs A",
            Scan1d,
            &[PARAM, "f1=0.5\nf2=0.1\n", &bias_m],
        ),
        p(
            "fig14a1",
            "Multistable oscillator, ic (1.8, 1.6): chaotic orbit",
            Simulate,
            &[MULTI, "x0=1.8\ny0=1.6\nrecord=200000\n"],
        ),
        p(
            "fig14a2",
            "Multistable oscillator, ic (1.67, -2.02)",
            Simulate,
            &[MULTI, "x0=1.67\ny0=-2.02\nrecord=200000\n"],
        ),
        p(
            "fig14b1",
            "Multistable oscillator, EE parameters, ic (0.5, 0.5)",
            Simulate,
            &[MULTI_EE, "x0=0.5\ny0=0.5\nrecord=200000\n"],
        ),
        p(
            "fig14b2",
            "Multistable oscillator, EE parameters, ic (1.67, -2.02)",
            Simulate,
            &[MULTI_EE, "x0=1.67\ny0=-2.02\nrecord=200000\n"],
        ),
        p(
            "fig15a-i",
            "Multistable oscillator: maxima and MLE vs omega1",
            Bifurcate,
            &[MULTI, &omega, two_ics],
        ),
        p(
            "fig15a-ii",
            "Multistable oscillator: maxima and MLE vs A",
            Bifurcate,
            &[MULTI, &bias_lm, two_ics],
        ),
        p(
            "fig15a-iv",
            "Multistable oscillator: maxima and MLE vs f2",
            Bifurcate,
            &[MULTI, &f2_lm, two_ics],
        ),
        p(
            "fig15b-i",
            "EE parameters: maxima and MLE vs omega1",
            Bifurcate,
            &[MULTI_EE, &omega, two_ics_ee],
        ),
        p(
            "fig15b-ii",
            "EE parameters: maxima and MLE vs A",
            Bifurcate,
            &[MULTI_EE, &bias_lm, two_ics_ee],
        ),
        p(
            "fig15b-iv",
            "EE parameters: maxima and MLE vs f2",
            Bifurcate,
            &[MULTI_EE, &f2_lm, two_ics_ee],
        ),
        p(
            "fig16a",
            "Basin of attraction, omega1=0.758",
            Basin,
            &[multi_basin, basin],
        ),
        p(
            "fig16b",
            "Basin of attraction, omega1=0.758, A=2",
            Basin,
            &[multi_basin, basin, "A=2.0\n"],
        ),
        p(
            "fig16c",
            "Basin of attraction, omega1=0.758, f2=1",
            Basin,
            &[multi_basin, basin, "f2=1.0\n"],
        ),
    ]
}

pub fn find(id: &str) -> Option<Preset> {
    presets()
        .into_iter()
        .find(|p| p.id.eq_ignore_ascii_case(id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn every_preset_parses() {
        let all = presets();
        assert!(all.len() > 40);
        for p in &all {
            let cfg = parse_config(&p.config).unwrap_or_else(|e| panic!("{}: {e}", p.id));
            if matches!(
                p.command,
                Command::Scan1d | Command::Bifurcate | Command::Scan2d
            ) {
                assert!(cfg.scan1.is_some(), "{}", p.id);
            }
            if p.command == Command::Scan2d {
                assert!(cfg.scan2.is_some(), "{}", p.id);
            }
        }
        let mut ids: Vec<_> = all.iter().map(|p| p.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), all.len());
    }

    #[test]
    fn lookup() {
        assert_eq!(find("FIG2B").unwrap().command, Command::Scan1d);
        assert!(find("fig99").is_none());
    }
}
