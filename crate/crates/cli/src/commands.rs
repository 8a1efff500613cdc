use std::collections::BTreeSet;
use std::f64::consts::TAU;

use anyhow::{bail, Context, Result};
use ellstab::balanced::KahlerChamber;
use ellstab::charalg::{Character, Monomial, Var};
use ellstab::framing::{self, FramingPoint, QuiverFrame};
use ellstab::hilbcomb::{self, DiagramRecord, DiflemForm, SlopeGrid};
use ellstab::qtheta::{self, ThetaArgument};
use ellstab::rat::{self, Q};
use ellstab::stabflow::{self, CheckStatus, RestrictionMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{CalibrateArgs, ComponentArgs, DiflemArgs, FormArg, FramingArgs, LimitArgs, ThetaArgs, YoungArgs};

/// Output of one command: JSON lines plus check counts.
pub struct Run {
    pub command: &'static str,
    pub lines: Vec<Value>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Run {
    fn new(command: &'static str) -> Self {
        Self { command, lines: Vec::new(), passed: 0, failed: 0, skipped: 0 }
    }

    /// Records a check line with its verdict.
    fn check(&mut self, mut line: Value, pass: bool) {
        line["pass"] = json!(pass);
        self.lines.push(line);
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    fn tally(&mut self, status: CheckStatus) {
        match status {
            CheckStatus::Pass => self.passed += 1,
            CheckStatus::Fail => self.failed += 1,
            CheckStatus::Skipped => self.skipped += 1,
        }
    }

    pub fn summary(&self) -> Value {
        json!({"summary": {
            "command": self.command,
            "checks": self.passed + self.failed,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
        }})
    }
}

fn fmt_q(x: Q) -> String {
    rat::format_q(x)
}

fn form(f: FormArg) -> DiflemForm {
    match f {
        FormArg::Corrected => DiflemForm::Corrected,
        FormArg::Literal => DiflemForm::Literal,
    }
}

fn form_name(f: FormArg) -> &'static str {
    match f {
        FormArg::Corrected => "corrected",
        FormArg::Literal => "literal",
    }
}

fn grid(b_max: i64) -> Result<SlopeGrid> {
    if b_max < 2 {
        bail!("--b-max must be at least 2");
    }
    Ok(SlopeGrid::new(&(2..=b_max).collect::<Vec<_>>(), false))
}

pub fn theta_verify(a: &ThetaArgs) -> Result<Run> {
    let mut run = Run::new("theta-verify");
    let order = a.order;
    run.check(json!({"check": "oddness", "order": fmt_q(order)}), qtheta::verify_oddness(order)?);
    for k in [-2, -1, 1, 2] {
        let ok = qtheta::verify_quasiperiod_power(order, k)?;
        run.check(json!({"check": "quasiperiod", "order": fmt_q(order), "k": k}), ok);
    }

    if a.w_denoms < 1 || a.w_max < 0 {
        bail!("--w-denoms must be positive and --w-max nonnegative");
    }
    let slopes: BTreeSet<Q> =
        (1..=a.w_denoms).flat_map(|d| (-a.w_max * d..=a.w_max * d).map(move |n| rat::q(n, d))).collect();
    let slopes: Vec<Q> = slopes.into_iter().collect();
    let verdicts: Vec<bool> = slopes.par_iter().map(|&w| qtheta::verify_shift_law(w)).collect::<ellstab::Result<_>>()?;
    for (w, ok) in slopes.iter().zip(verdicts) {
        run.check(json!({"check": "shiftLaw", "w": fmt_q(*w)}), ok);
    }

    if !(a.q > 0.0 && a.q < 1.0) {
        bail!("--q must lie in (0, 1)");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let arg = ThetaArgument::new(Monomial::var(Var::Equivariant(0)), Q::from_integer(0))?;
    let series = qtheta::theta_series(&arg, order)?;
    for _ in 0..8 {
        let root = Complex64::from_polar(rng.gen_range(0.7..1.4), rng.gen_range(0.0..TAU));
        let exact = series.eval_sqrt(&|_| root, a.q);
        let numeric = qtheta::numeric_theta_from_sqrt(root, Complex64::new(a.q, 0.0), 1e-15)?;
        let err = (exact - numeric).norm() / numeric.norm();
        let line = json!({"check": "numeric", "sqrtX": [root.re, root.im], "q": a.q, "relativeError": err});
        run.check(line, err <= a.tolerance);
    }
    Ok(run)
}

pub fn young_report(a: &YoungArgs) -> Result<Run> {
    let mut run = Run::new("young-report");
    let conv = a.conv.conventions();
    for lambda in hilbcomb::partitions(a.n) {
        let record = DiagramRecord::new(&lambda, &conv, a.b, a.w)?;
        run.check(serde_json::to_value(record)?, true);
    }
    Ok(run)
}

pub fn diflem_scan(a: &DiflemArgs) -> Result<Run> {
    let mut run = Run::new("diflem-scan");
    let conv = a.conv.conventions();
    let grid = match &a.w {
        Some(ws) => SlopeGrid { slopes: ws.clone() },
        None => grid(a.b_max)?,
    };
    let outcome = hilbcomb::diflem_check(a.n_max, &grid, &conv, form(a.form));
    let first = outcome.first_failure.as_ref().map(|f| {
        json!({"w": fmt_q(f.w), "lambda": f.lambda.to_string(), "mu": f.mu.to_string(),
               "lhs": fmt_q(f.lhs), "rhs": fmt_q(f.rhs)})
    });
    run.lines.push(json!({
        "conventions": conv.label(),
        "form": form_name(a.form),
        "nMax": a.n_max,
        "slopes": grid.slopes.len(),
        "pairs": outcome.pairs_checked,
        "failures": outcome.failures,
        "firstFailure": first,
    }));
    run.failed += outcome.failures;
    run.passed += outcome.pairs_checked - outcome.failures;
    Ok(run)
}

pub fn component_enum(a: &ComponentArgs) -> Result<Run> {
    let mut run = Run::new("component-enum");
    match (a.n, &a.framing) {
        (Some(n), None) => {
            let b = a.b.context("--b is required with --n")?;
            let conv = a.conv.conventions();
            for (residues, diagrams) in hilbcomb::enumerate_components(n, b, &conv)? {
                let names: Vec<String> = diagrams.iter().map(ToString::to_string).collect();
                run.check(json!({"b": b, "component": residues, "diagrams": names}), true);
            }
        }
        (None, Some(r)) => {
            let frame = QuiverFrame::new(r.clone(), a.dims.clone().context("--dims is required")?)?;
            let p = FramingPoint::new(a.w.clone().context("--w is required")?);
            if p.dim() != frame.framing_rank() {
                bail!("--w has {} entries, framing rank is {}", p.dim(), frame.framing_rank());
            }
            let blocks = framing::index_blocks(&p);
            let comps = framing::enumerate_fixed_components(&frame, &blocks)?;
            let split = frame.split_framing(&blocks)?;
            for c in &comps {
                run.lines.push(json!({"blocks": blocks.blocks(), "framings": split, "dimensions": c}));
            }
            let want = framing::component_count(&frame, &blocks);
            run.check(json!({"check": "componentCount", "count": comps.len(), "expected": want}), comps.len() as u64 == want);
        }
        _ => bail!("give either --n and --b, or --framing, --dims and --w"),
    }
    Ok(run)
}

pub fn calibrate(a: &CalibrateArgs) -> Result<Run> {
    let mut run = Run::new("calibrate");
    let report = hilbcomb::calibrate(a.n_max, &grid(a.b_max)?, form(a.form));
    for o in &report.outcomes {
        run.lines.push(json!({
            "conventions": o.conventions.label(),
            "form": form_name(a.form),
            "pairs": o.pairs_checked,
            "failures": o.failures,
            "passed": o.passed(),
        }));
    }
    let controls: Vec<String> =
        report.outcomes.iter().filter(|o| !o.passed()).map(|o| o.conventions.label()).collect();
    let ok = report.selected.is_some() && !controls.is_empty();
    run.check(
        json!({"check": "selection", "selected": report.selected.map(|c| c.label()), "negativeControls": controls}),
        ok,
    );
    Ok(run)
}

pub fn limit_apply(a: &LimitArgs) -> Result<Run> {
    let mut run = Run::new("limit-apply");
    let text = std::fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let t = RestrictionMatrix::from_json_str(&text)?;
    let chamber: KahlerChamber = a.chamber.parse()?;
    if chamber.len() != t.vars.kahler_count() {
        bail!("chamber has {} directions for {} Kähler variables", chamber.len(), t.vars.kahler_count());
    }
    if a.w.len() != t.vars.equivariant_count() {
        bail!("--w has {} entries for {} equivariant variables", a.w.len(), t.vars.equivariant_count());
    }

    let record = |run: &mut Run, stage: &str, report: &stabflow::Report| {
        for c in &report.checks {
            let mut line = serde_json::to_value(c).expect("serializable");
            line["stage"] = json!(stage);
            run.lines.push(line);
            run.tally(c.status);
        }
    };
    record(&mut run, "validate", &stabflow::validate_section(&t));
    match stabflow::apply_limit_theorem(&t, &a.w, &chamber) {
        Ok(out) => {
            run.check(
                json!({"stage": "limit", "candidate": out.candidate.to_json(&t.vars), "h": out.h}),
                true,
            );
            record(&mut run, "axioms", &stabflow::check_stab_axioms(&out.candidate, &t, &a.w));
        }
        Err(err) => run.check(json!({"stage": "limit", "error": err.to_string()}), false),
    }
    Ok(run)
}

pub fn framing_blocks(a: &FramingArgs) -> Result<Run> {
    let mut run = Run::new("framing-blocks");
    let p = FramingPoint::new(a.w.clone());
    let blocks = framing::index_blocks(&p);
    let b = framing::cyclic_order(&p);
    run.lines.push(json!({
        "w": a.w.iter().map(|x| fmt_q(*x)).collect::<Vec<_>>(),
        "hyperplanes": framing::active_hyperplanes(&p),
        "blocks": blocks.blocks(),
        "b": b,
    }));
    let integral = a.w.iter().all(|x| (*x * Q::from_integer(b as i64)).is_integer());
    run.check(json!({"check": "cyclicOrderIntegral", "b": b}), integral);

    let r = p.dim();
    for i in 1..=r {
        for j in i + 1..=r {
            let m = Monomial::from_ints([(Var::Equivariant(i as u16 - 1), 1), (Var::Equivariant(j as u16 - 1), -1)]);
            let moving = Character::monomial(m).invariant_part(p.coordinates()).is_zero();
            let normal = framing::normal_character_predicate(i, j, &blocks)?;
            run.check(json!({"check": "blockInvariance", "i": i, "j": j, "normal": normal}), normal == moving);
        }
    }

    if let Some(fr) = &a.framing {
        let frame = QuiverFrame::new(fr.clone(), a.dims.clone().context("--dims is required")?)?;
        if frame.framing_rank() != r {
            bail!("--w has {r} entries, framing rank is {}", frame.framing_rank());
        }
        let comps = framing::enumerate_fixed_components(&frame, &blocks)?;
        let want = framing::component_count(&frame, &blocks);
        run.check(
            json!({"check": "componentCount", "count": comps.len(), "expected": want, "framings": frame.split_framing(&blocks)?}),
            comps.len() as u64 == want,
        );
    }
    Ok(run)
}
