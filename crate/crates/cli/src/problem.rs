//! Line-oriented problem files.
//!
//! ```text
//! name Q12~E18
//! ring left
//! var u weight 2/5
//! potential u^5 + v^3 + u*w^2
//! ring right
//! ...
//! ansatz
//! shifts_even 0,1/4
//! shifts_odd 0,1/4        (or: grading_matrix <file>)
//! seed <file>
//! limits steps <n> polys <n> seconds <n>
//! ```
//!
//! `#` starts a comment. Paths are relative to the problem file.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use orbeq_core::ansatz::{parse_grading_file, AnsatzSpec, Seed};
use orbeq_core::groebner::Limits;
use orbeq_core::mf::TensorRingPair;
use orbeq_core::ring::{parse_polynomial, quasi_homogeneous_degree, GradedRing, Potential};
use orbeq_core::Rational;

#[derive(Debug, Clone, Default)]
pub struct RawSide {
    pub vars: Vec<(String, Rational)>,
    pub potential: Option<String>,
}

#[derive(Debug, Clone)]
pub enum AnsatzBlock {
    Shifts(Vec<Rational>, Vec<Rational>),
    GradingMatrix(PathBuf),
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub sides: [RawSide; 2],
    pub ansatz: Option<AnsatzBlock>,
    pub seed: Option<PathBuf>,
    pub limits: Option<Limits>,
}

/// A side after validation: the potential (weights normalized to degree 2)
/// and the degree under the weights as written.
pub struct ValidSide {
    pub potential: Potential,
    pub written_degree: Rational,
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    orbeq_core::scalar::parse_rational(s.trim()).map_err(|_| anyhow!("`{s}` is not a rational number"))
}

pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

/// `steps <n> polys <n> seconds <n>`, any subset, `=` allowed between key and
/// value. Missing keys keep their defaults.
pub fn parse_limits(s: &str) -> Result<Limits> {
    let words: Vec<&str> = s.split(|c: char| c.is_whitespace() || c == '=' || c == ',').filter(|w| !w.is_empty()).collect();
    if !words.len().is_multiple_of(2) {
        bail!("limits must be key/value pairs: `{s}`");
    }
    let mut limits = Limits::default();
    for kv in words.chunks(2) {
        let n: u64 = kv[1].parse().map_err(|_| anyhow!("`{}` is not a count", kv[1]))?;
        match kv[0] {
            "steps" => limits.max_pairs = n,
            "polys" => limits.max_basis = n as usize,
            "seconds" => limits.max_time = Some(Duration::from_secs(n)),
            k => bail!("unknown limit `{k}`"),
        }
    }
    Ok(limits)
}

impl Problem {
    pub fn load(path: &Path) -> Result<Problem> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Problem::parse(&text, dir).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str, dir: &Path) -> Result<Problem> {
        let mut name = None;
        let mut sides = [RawSide::default(), RawSide::default()];
        let mut current: Option<usize> = None;
        let mut in_ansatz = false;
        let (mut even, mut odd, mut grading) = (None, None, None);
        let mut seed = None;
        let mut limits = None;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).map_or((line, ""), |(a, b)| (a, b.trim()));
            let at = |e: anyhow::Error| e.context(format!("line {}", k + 1));
            match key {
                "name" => name = Some(rest.to_string()),
                "ring" => {
                    current = Some(match rest {
                        "left" => 0,
                        "right" => 1,
                        _ => return Err(at(anyhow!("expected `ring left` or `ring right`"))),
                    });
                    in_ansatz = false;
                }
                "var" => {
                    let side = current.filter(|_| !in_ansatz).ok_or_else(|| at(anyhow!("`var` outside a ring block")))?;
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let [v, "weight", w] = parts.as_slice() else {
                        return Err(at(anyhow!("expected `var <name> weight <p/q>`")));
                    };
                    sides[side].vars.push((v.to_string(), parse_rational(w).map_err(at)?));
                }
                "potential" => {
                    let side = current.filter(|_| !in_ansatz).ok_or_else(|| at(anyhow!("`potential` outside a ring block")))?;
                    sides[side].potential = Some(rest.to_string());
                }
                "ansatz" => in_ansatz = true,
                "shifts_even" if in_ansatz => even = Some(parse_rational_list(rest).map_err(at)?),
                "shifts_odd" if in_ansatz => odd = Some(parse_rational_list(rest).map_err(at)?),
                "grading_matrix" if in_ansatz => grading = Some(existing(dir, rest).map_err(at)?),
                "seed" => seed = Some(existing(dir, rest).map_err(at)?),
                "limits" => limits = Some(parse_limits(rest).map_err(at)?),
                _ => return Err(at(anyhow!("unexpected `{key}`"))),
            }
        }
        for (side, label) in sides.iter().zip(["left", "right"]) {
            if side.vars.is_empty() || side.potential.is_none() {
                bail!("ring {label} needs variables and a potential");
            }
        }
        let ansatz = match (even, odd, grading) {
            (None, None, None) => None,
            (Some(e), Some(o), None) => Some(AnsatzBlock::Shifts(e, o)),
            (None, None, Some(g)) => Some(AnsatzBlock::GradingMatrix(g)),
            _ => bail!("the ansatz block needs both shift lists or a grading matrix, not a mix"),
        };
        Ok(Problem { name: name.unwrap_or_else(|| "problem".into()), sides, ansatz, seed, limits })
    }

    pub fn validate_side(&self, i: usize) -> Result<ValidSide> {
        let side = &self.sides[i];
        let ring = GradedRing::geometric(side.vars.iter().cloned())?;
        let p = parse_polynomial(side.potential.as_deref().unwrap(), &ring)?;
        let written_degree = quasi_homogeneous_degree(&p)?;
        Ok(ValidSide { potential: Potential::validate(&p)?, written_degree })
    }

    pub fn pair(&self) -> Result<TensorRingPair> {
        let left = self.validate_side(0).context("left potential")?.potential;
        let right = self.validate_side(1).context("right potential")?.potential;
        Ok(TensorRingPair::new(left, right)?)
    }

    pub fn seed(&self, pair: &TensorRingPair, path: Option<&Path>) -> Result<Option<Seed>> {
        let Some(path) = path.or(self.seed.as_deref()) else { return Ok(None) };
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Ok(Some(Seed::parse(&text, pair.ring()).with_context(|| format!("in {}", path.display()))?))
    }

    /// The single ansatz of the problem: shifts from the ansatz block, or
    /// else from the seed's `shifts` line, and the seed if any.
    pub fn spec(&self, pair: &TensorRingPair, seed: Option<Seed>) -> Result<Option<AnsatzSpec>> {
        let shifts = match &self.ansatz {
            Some(AnsatzBlock::Shifts(e, o)) => Some((e.clone(), o.clone())),
            Some(AnsatzBlock::GradingMatrix(path)) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                Some(parse_grading_file(&text).with_context(|| format!("in {}", path.display()))?)
            }
            None => seed.as_ref().and_then(|s| s.shifts.clone()),
        };
        let Some((e, o)) = shifts else {
            if seed.is_some() {
                bail!("a seed needs shifts from the ansatz block or its own `shifts` line");
            }
            return Ok(None);
        };
        let spec = AnsatzSpec::new(pair.clone(), e, o)?;
        Ok(Some(match seed {
            Some(s) => spec.with_seed(s)?,
            None => spec,
        }))
    }

    pub fn limits(&self) -> Limits {
        self.limits.clone().unwrap_or_default()
    }
}

fn existing(dir: &Path, rel: &str) -> Result<PathBuf> {
    let p = dir.join(rel);
    if !p.is_file() {
        bail!("referenced file {} does not exist", p.display());
    }
    Ok(p)
}

/// Ring for matrix files: the pair ring plus any parameter names.
pub fn matrix_ring(pair: &TensorRingPair, params: &[String]) -> Result<Arc<GradedRing>> {
    if params.is_empty() {
        return Ok(pair.ring().clone());
    }
    Ok(pair.ring().with_parameters(params.iter().cloned())?)
}
