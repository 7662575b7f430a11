use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{FuzzyError, MembershipFunction, Result};

pub const DEFAULT_SAMPLES: usize = 201;
pub const MIN_SAMPLES: usize = 51;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSet {
    pub label: String,
    pub mf: MembershipFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyVariable {
    pub name: String,
    /// Universe of discourse `[min, max]`.
    pub range: [f64; 2],
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub units: String,
    pub sets: Vec<LabeledSet>,
}

impl FuzzyVariable {
    pub fn new(
        name: &str,
        range: [f64; 2],
        units: &str,
        sets: &[(&str, MembershipFunction)],
    ) -> Self {
        Self {
            name: name.into(),
            range,
            units: units.into(),
            sets: sets
                .iter()
                .map(|(label, mf)| LabeledSet {
                    label: (*label).into(),
                    mf: *mf,
                })
                .collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        let [lo, hi] = self.range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FuzzyError::BadUniverse(self.name.clone()));
        }
        if self.sets.len() < 2 {
            return Err(FuzzyError::TooFewLabels(self.name.clone()));
        }
        let mut seen = HashSet::new();
        for s in &self.sets {
            if !seen.insert(s.label.as_str()) {
                return Err(FuzzyError::DuplicateName(format!(
                    "{}.{}",
                    self.name, s.label
                )));
            }
            let inside = s.mf.breakpoints().iter().all(|&p| lo <= p && p <= hi);
            if !s.mf.is_well_formed() || !inside {
                return Err(FuzzyError::BadBreakpoints {
                    variable: self.name.clone(),
                    label: s.label.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.range[0], self.range[1])
    }

    /// Degree of every label at `x`, after clamping `x` into the universe.
    pub fn fuzzify(&self, x: f64) -> Vec<(String, f64)> {
        let x = self.clamp(x);
        self.sets
            .iter()
            .map(|s| (s.label.clone(), s.mf.degree(x)))
            .collect()
    }

    fn label_index(&self, label: &str) -> Option<usize> {
        self.sets.iter().position(|s| s.label == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub variable: String,
    pub label: String,
}

impl Clause {
    pub fn new(variable: &str, label: &str) -> Self {
        Self {
            variable: variable.into(),
            label: label.into(),
        }
    }
}

/// `if a₁ and a₂ … then c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    #[serde(rename = "if")]
    pub antecedents: Vec<Clause>,
    #[serde(rename = "then")]
    pub consequent: Clause,
}

impl Rule {
    pub fn new(antecedents: &[(&str, &str)], consequent: (&str, &str)) -> Self {
        Self {
            antecedents: antecedents.iter().map(|(v, l)| Clause::new(v, l)).collect(),
            consequent: Clause::new(consequent.0, consequent.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SystemDocument {
    inputs: Vec<FuzzyVariable>,
    outputs: Vec<FuzzyVariable>,
    rules: Vec<Rule>,
    #[serde(default = "default_samples")]
    samples: usize,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

#[derive(Debug, Clone, PartialEq)]
struct ResolvedRule {
    antecedents: Vec<(usize, usize)>,
    output: usize,
    label: usize,
}

/// Output universe sampled once: abscissae plus each label's membership.
#[derive(Debug, Clone, PartialEq)]
struct SampledOutput {
    xs: Vec<f64>,
    sets: Vec<Vec<f64>>,
}

/// A validated, immutable Mamdani system.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySystem {
    doc: SystemDocument,
    rules: Vec<ResolvedRule>,
    sampled: Vec<SampledOutput>,
}

impl Serialize for FuzzySystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FuzzySystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SystemDocument::deserialize(d)?;
        Self::build(doc).map_err(serde::de::Error::custom)
    }
}

impl FuzzySystem {
    pub fn new(
        inputs: Vec<FuzzyVariable>,
        outputs: Vec<FuzzyVariable>,
        rules: Vec<Rule>,
        samples: usize,
    ) -> Result<Self> {
        Self::build(SystemDocument {
            inputs,
            outputs,
            rules,
            samples,
        })
    }

    fn build(doc: SystemDocument) -> Result<Self> {
        if doc.samples < MIN_SAMPLES {
            return Err(FuzzyError::TooFewSamples {
                min: MIN_SAMPLES,
                got: doc.samples,
            });
        }
        let mut names = HashSet::new();
        for v in doc.inputs.iter().chain(&doc.outputs) {
            v.validate()?;
            if !names.insert(v.name.as_str()) {
                return Err(FuzzyError::DuplicateName(v.name.clone()));
            }
        }
        let resolve = |vars: &[FuzzyVariable], clause: &Clause| -> Result<Option<(usize, usize)>> {
            let Some(vi) = vars.iter().position(|v| v.name == clause.variable) else {
                return Ok(None);
            };
            let li =
                vars[vi]
                    .label_index(&clause.label)
                    .ok_or_else(|| FuzzyError::UnknownLabel {
                        variable: clause.variable.clone(),
                        label: clause.label.clone(),
                    })?;
            Ok(Some((vi, li)))
        };
        let role_error = |rule: usize, clause: &Clause, expected: &'static str| {
            if names.contains(clause.variable.as_str()) {
                FuzzyError::WrongRole {
                    rule,
                    variable: clause.variable.clone(),
                    expected,
                }
            } else {
                FuzzyError::UnknownVariable(clause.variable.clone())
            }
        };
        let mut rules = Vec::with_capacity(doc.rules.len());
        for (ri, rule) in doc.rules.iter().enumerate() {
            if rule.antecedents.is_empty() {
                return Err(FuzzyError::EmptyAntecedent(ri));
            }
            let mut antecedents = Vec::with_capacity(rule.antecedents.len());
            for clause in &rule.antecedents {
                let pair =
                    resolve(&doc.inputs, clause)?.ok_or_else(|| role_error(ri, clause, "input"))?;
                antecedents.push(pair);
            }
            let (output, label) = resolve(&doc.outputs, &rule.consequent)?
                .ok_or_else(|| role_error(ri, &rule.consequent, "output"))?;
            rules.push(ResolvedRule {
                antecedents,
                output,
                label,
            });
        }
        let sampled = doc
            .outputs
            .iter()
            .map(|v| {
                let [lo, hi] = v.range;
                let step = (hi - lo) / (doc.samples - 1) as f64;
                let xs: Vec<f64> = (0..doc.samples).map(|i| lo + step * i as f64).collect();
                let sets = v
                    .sets
                    .iter()
                    .map(|s| xs.iter().map(|&x| s.mf.degree(x)).collect())
                    .collect();
                SampledOutput { xs, sets }
            })
            .collect();
        Ok(Self {
            doc,
            rules,
            sampled,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SystemDocument =
            serde_json::from_str(text).map_err(|e| FuzzyError::BadDocument(e.to_string()))?;
        Self::build(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("plain data serializes")
    }

    pub fn inputs(&self) -> &[FuzzyVariable] {
        &self.doc.inputs
    }

    pub fn outputs(&self) -> &[FuzzyVariable] {
        &self.doc.outputs
    }

    pub fn rules(&self) -> &[Rule] {
        &self.doc.rules
    }

    pub fn samples(&self) -> usize {
        self.doc.samples
    }

    /// Crisp outputs for inputs given in declaration order.
    pub fn infer_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.doc.inputs.len() {
            return Err(FuzzyError::InputCount {
                expected: self.doc.inputs.len(),
                got: x.len(),
            });
        }
        let degrees: Vec<Vec<f64>> = self
            .doc
            .inputs
            .iter()
            .zip(x)
            .map(|(v, &xi)| {
                if !xi.is_finite() {
                    return Err(FuzzyError::NonFiniteInput(v.name.clone()));
                }
                let xi = v.clamp(xi);
                Ok(v.sets.iter().map(|s| s.mf.degree(xi)).collect())
            })
            .collect::<Result<_>>()?;

        let mut aggregate: Vec<Vec<f64>> =
            self.sampled.iter().map(|s| vec![0.0; s.xs.len()]).collect();
        for rule in &self.rules {
            let firing = rule
                .antecedents
                .iter()
                .map(|&(v, l)| degrees[v][l])
                .fold(1.0f64, f64::min);
            if firing <= 0.0 {
                continue;
            }
            let set = &self.sampled[rule.output].sets[rule.label];
            for (acc, &mu) in aggregate[rule.output].iter_mut().zip(set) {
                *acc = acc.max(mu.min(firing));
            }
        }

        self.sampled
            .iter()
            .zip(&aggregate)
            .zip(&self.doc.outputs)
            .map(|((s, agg), var)| {
                let (num, den) =
                    s.xs.iter()
                        .zip(agg)
                        .fold((0.0, 0.0), |(n, d), (&x, &mu)| (n + x * mu, d + mu));
                if den > 0.0 {
                    Ok(num / den)
                } else {
                    Err(FuzzyError::NoRuleFired(var.name.clone()))
                }
            })
            .collect()
    }

    /// Crisp outputs keyed by output name. Every input must be supplied and
    /// no unknown names are accepted.
    pub fn infer(&self, inputs: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
        if let Some(extra) = inputs
            .keys()
            .find(|k| !self.doc.inputs.iter().any(|v| &v.name == *k))
        {
            return Err(FuzzyError::UnknownVariable(extra.clone()));
        }
        let x: Vec<f64> = self
            .doc
            .inputs
            .iter()
            .map(|v| {
                inputs
                    .get(&v.name)
                    .copied()
                    .ok_or_else(|| FuzzyError::MissingInput(v.name.clone()))
            })
            .collect::<Result<_>>()?;
        let y = self.infer_values(&x)?;
        Ok(self
            .doc
            .outputs
            .iter()
            .map(|v| v.name.clone())
            .zip(y)
            .collect())
    }
}
