//! Dispatch of each command onto the library.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use clap::ValueEnum;
use gkz_core::arith::{FieldTower, FiniteField};
use gkz_core::frobenius::{
    charpoly_from_power_sums, hankel_rank_estimate, nondegenerate_check, power_sums, verify_point, weight_spectrum,
    Check, Status, VerifyOptions,
};
use gkz_core::lattice::{normalized_volume, ExponentMatrix};
use gkz_core::resonance::nonresonant;
use gkz_core::sums::{
    batch_all_characters, gauss_sum, hyp_sum, katz_equivalence, kloosterman_matrix, kloosterman_sum, SumQuery, SumValue,
};
use gkz_core::weights::{alpha, alpha_of_quotient, beta, e_polynomial, e_value, expected_spectrum, WeightPolynomial};
use gkz_core::{CycloNumber, Error};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Coordinate, InstanceConfig};
use crate::error::CliError;
use crate::sample::{sample_point, Sampled};
use crate::suites::run_suites;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Sum,
    Gauss,
    Kloosterman,
    Katz,
    Batch,
    Volume,
    AlphaBeta,
    Weights,
    Resonance,
    Nondegen,
    Lfactor,
    Verify,
    Identities,
}

/// Output of one run.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Command,
    /// Effective configuration; a sampled x is written back so the run can be replayed.
    pub config: InstanceConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled: Option<Sampled>,
    pub results: Value,
    pub checks: BTreeMap<String, bool>,
    pub timing_ms: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|v| *v)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// Short human-readable rendering.
    pub fn summary(&self) -> String {
        let name = serde_json::to_value(self.command).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let mut out = format!("{name}  q = {}^{}\n", self.config.p, self.config.e);
        if let Some(s) = &self.sampled {
            out += &format!("sampled x = {:?} after {} rejections (seed {})\n", s.x, s.rejections, s.seed);
        }
        if let Value::Object(map) = &self.results {
            for (k, v) in map {
                let mut text = v.to_string();
                if text.len() > 160 {
                    text.truncate(157);
                    text += "...";
                }
                out += &format!("  {k}: {text}\n");
            }
        }
        for (k, v) in &self.checks {
            out += &format!("  [{}] {k}\n", if *v { "pass" } else { "FAIL" });
        }
        out += &format!("{:.1} ms\n", self.timing_ms);
        out
    }
}

struct Context {
    config: InstanceConfig,
    field: Arc<FiniteField>,
    budget: u128,
    sampled: Option<Sampled>,
}

impl Context {
    fn tower(&self) -> Result<FieldTower, CliError> {
        Ok(FieldTower::new(self.field.clone(), 1)?)
    }

    /// x from the config, or a sampled nondegenerate point.
    fn point(&mut self, a: &ExponentMatrix) -> Result<Vec<u64>, CliError> {
        if let Some(x) = self.config.point(&self.field, a.ncols())? {
            return Ok(x);
        }
        let s = sample_point(&self.field, a, self.config.m_max, self.budget, self.config.seed, self.config.attempts)?;
        self.config.x = Some(s.x.iter().map(|v| Coordinate::Element(*v)).collect());
        let x = s.x.clone();
        self.sampled = Some(s);
        Ok(x)
    }

    /// The single parameter used by `kloosterman` and `katz`.
    fn scalar(&self) -> Result<u64, CliError> {
        Ok(self.config.point(&self.field, 1)?.map(|x| x[0]).unwrap_or(1))
    }
}

fn poly_map(e: &WeightPolynomial) -> BTreeMap<usize, i64> {
    e.terms().collect()
}

fn check_map(pairs: &[(&str, Check)]) -> BTreeMap<String, bool> {
    pairs
        .iter()
        .filter(|(_, c)| matches!(c, Check::Pass | Check::Fail))
        .map(|(k, c)| (k.to_string(), *c == Check::Pass))
        .collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Runs `command` on `config`.
pub fn run(command: Command, config: &InstanceConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut ctx =
        Context { config: config.clone(), field: config.field()?, budget: config.budget()?, sampled: None };
    let mut checks = BTreeMap::new();
    let results = match command {
        Command::Sum => {
            let a = ctx.config.matrix()?;
            let chi = ctx.config.character(&ctx.field, a.n())?;
            let x = ctx.point(&a)?;
            let t = ctx.tower()?;
            let v = hyp_sum(&SumQuery::new(&t, &a, &chi, &x).with_budget(ctx.budget))?;
            json!({ "x": x, "value": SumValue::new(v) })
        }
        Command::Gauss => {
            let chi = ctx.config.character(&ctx.field, 1)?;
            let t = ctx.tower()?;
            let g = gauss_sum(&chi, &t)?;
            if !chi.is_trivial() {
                let norm = &g * &g.conj();
                checks.insert("norm_is_q".into(), norm == CycloNumber::from_integer(1, ctx.field.size() as i64));
            }
            json!({ "value": SumValue::new(g) })
        }
        Command::Kloosterman => {
            let n = ctx.config.chi.len().max(1);
            let chi = ctx.config.character(&ctx.field, n)?;
            let x = ctx.scalar()?;
            let t = ctx.tower()?;
            let kl = kloosterman_sum(&chi, x, &t)?;
            let mut point = vec![1; n];
            point.push(x);
            let hyp = hyp_sum(&SumQuery::new(&t, &kloosterman_matrix(n)?, &chi, &point).with_budget(ctx.budget))?;
            checks.insert("matches_hyp".into(), kl == hyp);
            json!({ "x": x, "value": SumValue::new(kl) })
        }
        Command::Katz => {
            let [n, m] = ctx.config.shape.unwrap_or([1, 1]);
            let chi = ctx.config.character(&ctx.field, (n + m).saturating_sub(1))?;
            let x = ctx.scalar()?;
            let rep = katz_equivalence(&ctx.tower()?, n, m, &chi, x)?;
            checks.insert("katz_equivalence".into(), rep.holds);
            json!({ "shape": [n, m], "x": x, "katz": SumValue::new(rep.lhs), "hyp": SumValue::new(rep.rhs) })
        }
        Command::Batch => {
            let a = ctx.config.matrix()?;
            let x = ctx.point(&a)?;
            let t = ctx.tower()?;
            let table = batch_all_characters(&t, &a, &x, ctx.budget)?;
            let total = table.values.iter().fold(CycloNumber::zero(1), |s, v| &s + v);
            let sx = x.iter().fold(0, |s, v| t.ext().add(s, *v));
            let expect = &CycloNumber::from_integer(1, (table.order as i64).pow(a.n() as u32))
                * &gkz_core::arith::additive_char(&t, sx)?;
            checks.insert("orthogonality".into(), total == expect);
            let entries: Vec<Value> =
                table.entries().map(|(c, v)| json!({ "chi": c, "value": SumValue::new(v.clone()) })).collect();
            json!({ "x": x, "order": table.order, "table": entries })
        }
        Command::Volume => {
            let a = ctx.config.matrix()?;
            let delta = a.newton_polytope();
            json!({
                "dim": delta.dim(),
                "vertices": delta.vertices(),
                "f_vector": delta.face_lattice().f_vector(),
                "normalized_volume": normalized_volume(&delta),
            })
        }
        Command::AlphaBeta => {
            let a = ctx.config.matrix()?;
            let delta = a.newton_polytope();
            let cone = a.cone();
            let b = beta(&delta);
            let al = alpha(&cone)?;
            let faces: Vec<Value> = cone
                .proper_faces()
                .into_iter()
                .map(|i| {
                    let q = alpha_of_quotient(&cone, i);
                    json!({ "face": i, "dim": cone.face_lattice().face(i).dim, "alpha_quotient": poly_map(&q) })
                })
                .collect();
            let even = b.only_even_powers()
                && al.only_even_powers()
                && cone.proper_faces().into_iter().all(|i| alpha_of_quotient(&cone, i).only_even_powers());
            checks.insert("even_powers".into(), even);
            json!({ "beta_delta": poly_map(&b), "alpha_cone": poly_map(&al), "faces": faces })
        }
        Command::Weights => {
            let a = ctx.config.matrix()?;
            let chi = ctx.config.character(&ctx.field, a.n())?;
            let vol = normalized_volume(&a.newton_polytope());
            let e_poly = e_polynomial(&a, &chi)?;
            let sign = if a.ncols() % 2 == 0 { 1 } else { -1 };
            checks.insert("value_at_one".into(), e_poly.eval_at_one() == sign * vol as i64);
            checks.insert("degree_bound".into(), e_poly.degree().is_none_or(|d| d <= a.n() + a.ncols()));
            let expected = expected_spectrum(&e_poly, a.n(), a.ncols(), vol)?;
            json!({ "E": poly_map(&e_poly), "e": e_value(&a, &chi), "degree": vol, "expected": expected })
        }
        Command::Resonance => {
            let a = ctx.config.matrix()?;
            let chi = ctx.config.character(&ctx.field, a.n())?;
            let rep = nonresonant(&chi, &a.cone());
            checks.insert("oracles_agree".into(), rep.all_faces_agree);
            json!({ "report": rep, "columns_generate_lattice": a.columns_generate_lattice() })
        }
        Command::Nondegen => {
            let a = ctx.config.matrix()?;
            let x = ctx.point(&a)?;
            let rep = nondegenerate_check(&ctx.field, &a, &x, ctx.config.m_max, ctx.budget)?;
            checks.insert("nondegenerate".into(), rep.nondegenerate);
            json!({ "x": x, "report": rep })
        }
        Command::Lfactor => {
            let a = ctx.config.matrix()?;
            let chi = ctx.config.character(&ctx.field, a.n())?;
            let x = ctx.point(&a)?;
            let d = normalized_volume(&a.newton_polytope()) as usize;
            let depth = ctx.config.depth.unwrap_or(d + 2);
            let series = power_sums(&ctx.field, &a, &chi, &x, depth, ctx.budget)?;
            let hankel = hankel_rank_estimate(&series, ctx.config.digits);
            match charpoly_from_power_sums(&series, d) {
                Ok(poly) => {
                    checks.insert("consistency".into(), true);
                    let spectrum = weight_spectrum(&poly, ctx.field.size(), a.n(), ctx.config.digits, 1e-6)?;
                    json!({ "x": x, "degree": d, "power_sums": series.s, "charpoly": poly,
                            "spectrum": spectrum, "hankel_rank_estimate": hankel })
                }
                Err(Error::InconsistentPowerSums { index, .. }) => {
                    checks.insert("consistency".into(), false);
                    json!({ "x": x, "degree": d, "power_sums": series.s, "inconsistent_at": index,
                            "hankel_rank_estimate": hankel })
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Verify => {
            let a = ctx.config.matrix()?;
            let chi = ctx.config.character(&ctx.field, a.n())?;
            let x = ctx.point(&a)?;
            let opts = VerifyOptions {
                depth: ctx.config.depth,
                digits: ctx.config.digits,
                m_max: ctx.config.m_max,
                budget: ctx.budget,
                ..VerifyOptions::default()
            };
            let rep = verify_point(&ctx.field, &a, &chi, &x, &opts)?;
            checks = check_map(&[
                ("rank", rep.checks.rank),
                ("spectrum", rep.checks.spectrum),
                ("purity", rep.checks.purity),
                ("top_count", rep.checks.top_count),
            ]);
            checks.insert("hypotheses".into(), rep.status != Status::HypothesesUnverified);
            json!({ "x": x, "report": rep })
        }
        Command::Identities => {
            let rep = run_suites(ctx.config.seed, ctx.budget)?;
            checks.insert("mixed_vs_twisted".into(), rep.mixed_vs_twisted.holds());
            checks.insert("homogeneity".into(), rep.homogeneity.holds());
            checks.insert("katz".into(), rep.katz.holds());
            checks.insert("nonconfluent".into(), rep.nonconfluent.holds());
            to_value(&rep)
        }
    };
    Ok(Report {
        command,
        config: ctx.config,
        sampled: ctx.sampled,
        results,
        checks,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
