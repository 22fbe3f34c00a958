use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use num_complex::Complex64 as C64;
use qwalk::composite::histogram_csv;
use qwalk::oracle;
use qwalk::parrondo::{
    build_family, caps_csv, design_daisy_chain, label_string, parrondo_cap, persistence_scan,
    region_map,
};
use qwalk::payoff::analyze as analyze_walk;
use qwalk::svg::{histogram_svg, persistence_svg, region_svg};
use qwalk::{BlochAngles, CoinDensity, CoinObservableAnalysis, CoinState, Mat2, QuantumStep, Walk};

use crate::config::Resolved;
use crate::Outcome;

pub struct Ctx {
    pub r: Resolved,
    pub out: Option<PathBuf>,
    pub tie_tol: f64,
}

impl Ctx {
    fn write(&self, name: &str, contents: &str) -> Result<()> {
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path: PathBuf = Path::new(dir).join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }

    fn title(&self, default: &str) -> String {
        self.r
            .cfg
            .title
            .clone()
            .unwrap_or_else(|| default.to_string())
    }

    /// The configured single walk, or every walk of the family at the configured cycle count.
    fn walks(&self) -> Result<Vec<(String, Walk)>> {
        if let Some(w) = &self.r.cfg.walk {
            return Ok(vec![("walk".into(), w.clone())]);
        }
        let fam = build_family(&self.r.family_steps()?, self.r.cycles())?;
        Ok(fam
            .walks()
            .iter()
            .enumerate()
            .map(|(i, w)| (format!("W{}", i + 1), w.clone()))
            .collect())
    }
}

fn c3(z: C64) -> String {
    let im = if z.im.abs() < 5e-4 { 0.0 } else { z.im };
    let re = if z.re.abs() < 5e-4 { 0.0 } else { z.re };
    if im == 0.0 {
        format!("{re:.3}")
    } else if re == 0.0 {
        format!("{im:.3}i")
    } else {
        format!("{re:.3}{im:+.3}i")
    }
}

fn ket(s: &CoinState) -> String {
    let a = qwalk::linalg::canonical_phase(s.amplitudes());
    format!("({})|0> + ({})|1>", c3(a[0]), c3(a[1]))
}

fn matrix(m: &Mat2) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        c3(m.get(0, 0)),
        c3(m.get(0, 1)),
        c3(m.get(1, 0)),
        c3(m.get(1, 1))
    )
}

fn fmt3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn safe(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

pub fn run(ctx: &Ctx) -> Result<Outcome> {
    let homes = ctx.r.homes()?;
    let mut jobs: Vec<(String, Walk)> = Vec::new();
    if ctx.r.cfg.walk.is_some() {
        jobs = ctx.walks()?;
    } else {
        let steps = ctx.r.family_steps()?;
        for n in ctx.r.n_range()? {
            let fam = build_family(&steps, n)?;
            for (i, w) in fam.walks().iter().enumerate() {
                jobs.push((format!("n{n}_W{}", i + 1), w.clone()));
            }
        }
    }
    let mut out = String::new();
    for (label, walk) in &jobs {
        for (h, (name, home)) in homes.iter().enumerate() {
            let hist = walk.run_mixed(home).histogram();
            let mean: f64 = hist.iter().map(|(m, p)| *m as f64 * p).sum();
            let _ = writeln!(out, "# {label} home={name} mean={}", fmt3(mean));
            let csv = histogram_csv(&hist);
            out.push_str(&csv);
            let stem = format!("hist_{label}_h{}_{}", h + 1, safe(name));
            ctx.write(&format!("{stem}.csv"), &csv)?;
            ctx.write(
                &format!("{stem}.svg"),
                &histogram_svg(&hist, &ctx.title(&format!("{label}, home {name}"))),
            )?;
        }
    }
    print!("{out}");
    Ok(Outcome::Ok)
}

fn describe(out: &mut String, label: &str, a: &CoinObservableAnalysis) {
    let _ = writeln!(out, "{label}");
    let _ = writeln!(out, "  o     = {}", matrix(&a.o_matrix));
    let _ = writeln!(
        out,
        "  o_max = {}  v_max = {}",
        fmt3(a.o_max),
        ket(&a.v_max)
    );
    let _ = writeln!(
        out,
        "  o_min = {}  v_min = {}",
        fmt3(a.o_min),
        ket(&a.v_min)
    );
    match a.omega_cap {
        Some(w) => {
            let _ = writeln!(out, "  Omega = {}", fmt3(w));
        }
        None => {
            let _ = writeln!(
                out,
                "  degenerate: payoff is {} for every home-state",
                fmt3(0.5 * (a.o_max + a.o_min))
            );
        }
    }
}

pub fn analyze(ctx: &Ctx) -> Result<Outcome> {
    let o = ctx.r.observable()?;
    let omega = ctx.r.omega();
    let walks = ctx.walks()?;
    let analyses: Vec<CoinObservableAnalysis> = walks
        .iter()
        .map(|(_, w)| analyze_walk(&o, w, omega))
        .collect();
    let mut out = format!("observable {o}, omega {}\n", fmt3(omega));
    for ((label, _), a) in walks.iter().zip(&analyses) {
        describe(&mut out, label, a);
    }
    if ctx.r.cfg.homes.is_some() {
        let fam = qwalk::parrondo::FamilyAnalysis {
            walks: analyses.clone(),
        };
        out.push_str("payoffs\n");
        for (name, home) in ctx.r.homes()? {
            let pays = fam.payoffs(&home);
            let labels = fam.labels(&home, ctx.tie_tol);
            let cells: Vec<String> = pays.iter().map(|p| fmt3(*p)).collect();
            let _ = writeln!(
                out,
                "  {name}: {}  {}",
                cells.join(" "),
                label_string(&labels)
            );
        }
    }
    if walks.len() > 1 {
        let caps = qwalk::parrondo::FamilyAnalysis { walks: analyses }.caps();
        let csv = caps_csv(&caps);
        out.push_str("caps\n");
        out.push_str(&csv);
        ctx.write("caps.csv", &csv)?;
    }
    print!("{out}");
    Ok(Outcome::Ok)
}

fn marker_angles(d: &CoinDensity) -> BlochAngles {
    d.qubit_vector().angles()
}

pub fn regions(ctx: &Ctx) -> Result<Outcome> {
    let o = ctx.r.observable()?;
    let omega = ctx.r.omega();
    let fam = build_family(&ctx.r.family_steps()?, ctx.r.cycles())?;
    let map = region_map(&fam, &o, omega, ctx.r.grid(), ctx.tie_tol)?;
    let analysis = fam.analyze(&o, omega);
    let markers = ctx.r.markers()?;

    let mut out = format!(
        "{} walks, observable {o}, omega {}, grid {}x{}\n",
        fam.walks().len(),
        fmt3(omega),
        map.n_theta,
        map.n_phi
    );
    for (label, count) in map.region_counts() {
        let _ = writeln!(out, "  {label}: {count}");
    }
    let _ = writeln!(
        out,
        "parrondo nodes: {} of {}",
        map.parrondo_count(),
        map.nodes.len()
    );
    for (name, d) in &markers {
        let labels = analysis.labels(d, ctx.tie_tol);
        let _ = writeln!(
            out,
            "marker {name}: {}{}",
            label_string(&labels),
            if qwalk::parrondo::is_parrondo(&labels) {
                " (Parrondo)"
            } else {
                ""
            }
        );
    }
    ctx.write("regions.csv", &map.csv())?;
    let svg_markers: Vec<(String, BlochAngles)> = markers
        .iter()
        .map(|(n, d)| (n.clone(), marker_angles(d)))
        .collect();
    ctx.write(
        "regions.svg",
        &region_svg(
            &map,
            &svg_markers,
            &ctx.title(&format!("Win/lose regions, {o}")),
        ),
    )?;
    ctx.write("caps.csv", &caps_csv(&analysis.caps()))?;
    print!("{out}");
    Ok(Outcome::Ok)
}

pub fn persist(ctx: &Ctx) -> Result<Outcome> {
    let o = ctx.r.observable()?;
    let omega = ctx.r.omega();
    let steps = ctx.r.family_steps()?;
    let range = ctx.r.n_range()?;
    let mut out = String::new();
    for (h, (name, home)) in ctx.r.homes()?.iter().enumerate() {
        let scan = persistence_scan(&steps, &o, omega, home, range.clone(), ctx.tie_tol)?;
        let _ = writeln!(out, "home {name}, observable {o}");
        for row in &scan.rows {
            let cells: Vec<String> = row.payoffs.iter().map(|p| fmt3(*p)).collect();
            let _ = writeln!(
                out,
                "  n={:<3} {}  {}{}",
                row.n,
                cells.join(" "),
                label_string(&row.labels),
                if row.parrondo { "  Parrondo" } else { "" }
            );
        }
        match scan.onset {
            Some(n0) if scan.persistent => {
                let _ = writeln!(out, "  persistent over the scanned range from n = {n0}");
            }
            Some(n0) => {
                let _ = writeln!(
                    out,
                    "  Parrondo first at n = {n0}, not persistent over the scanned range"
                );
            }
            None => out.push_str("  never Parrondo in the scanned range\n"),
        }
        let max_comm = scan
            .commutator_norms()
            .iter()
            .flat_map(|(_, _, v)| v.iter().copied())
            .fold(0.0f64, f64::max);
        let _ = writeln!(
            out,
            "  max commutator norm between consecutive n: {max_comm:.3e}"
        );
        let stem = format!("persist_h{}_{}", h + 1, safe(name));
        ctx.write(&format!("{stem}.csv"), &scan.csv())?;
        ctx.write(
            &format!("{stem}.svg"),
            &persistence_svg(
                &scan,
                omega,
                &ctx.title(&format!("Payoffs vs n, home {name}, {o}")),
            ),
        )?;
    }
    print!("{out}");
    Ok(Outcome::Ok)
}

pub fn design(ctx: &Ctx) -> Result<Outcome> {
    let spec = ctx.r.design()?;
    let steps = design_daisy_chain(&spec)?;
    let cap = parrondo_cap(&steps)?;
    let qsteps: Vec<QuantumStep> = steps.iter().map(|s| QuantumStep::from(*s)).collect();
    let json = serde_json::to_string_pretty(&qsteps)?;
    let fam = build_family(&qsteps, ctx.r.cycles())?;
    let analysis = fam.analyze(&qwalk::Observable::mu(), 0.0);
    let caps = caps_csv(&analysis.caps());

    let mut out = String::from("steps\n");
    out.push_str(&json);
    out.push('\n');
    let _ = writeln!(out, "target {}", cap.target);
    let _ = writeln!(out, "sum p = {}, sum q = {}", cap.sum_p, cap.sum_q);
    let _ = writeln!(out, "Q = {} ({})", cap.q, fmt3(cap.q.value()));
    let _ = writeln!(
        out,
        "Parrondo iff |<w|s>|^2 > Q, i.e. latitude from w below {:.6} rad ({:.3} deg)",
        cap.nu_max,
        cap.nu_max.to_degrees()
    );
    let slope = cap.sum_p - cap.sum_q;
    let sign = if cap.sum_q < 0 { '-' } else { '+' };
    let _ = writeln!(
        out,
        "sequenced walk payoff: n({slope}x {sign} {}), x = |<w|s>|^2",
        cap.sum_q.abs()
    );
    out.push_str("caps (mu, omega 0)\n");
    out.push_str(&caps);
    ctx.write("design.json", &json)?;
    ctx.write("caps.csv", &caps)?;
    print!("{out}");
    Ok(Outcome::Ok)
}

pub fn oracle(ctx: &Ctx, seed: u64, trials: usize) -> Result<Outcome> {
    let report = oracle::run_all(seed, trials);
    let text = report.to_string();
    print!("{text}");
    if !text.ends_with('\n') {
        println!();
    }
    ctx.write("oracle.txt", &text)?;
    Ok(if report.passed() {
        Outcome::Ok
    } else {
        Outcome::PropertyFailure
    })
}
