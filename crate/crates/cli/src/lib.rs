//! Commands behind the `sofic` binary.
//!
//! Every command returns an [`Outcome`] holding its exit code and output, so
//! the binary only prints and exits. Errors map to exit code 2 and keep the
//! pipeline stage tag in their message.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sofic_core::certificate::{parse_rational, to_pretty_json};
use sofic_core::stallings::DEFAULT_CORE_CAP;
use sofic_core::verifier::ORACLE_MAX_B;
use sofic_core::{
    approximate, biregular_approx, brute_force_witness, check_orbit_witness, core_graph, hall_completion,
    invalidating_mutations, restrict_approx, verify, Action, ActionJson, ActionSpec, BuildOptions, Certificate,
    Error, GroupElement, Point, Rational, Result, Strategy, VerificationReport, Word,
};

pub const EXIT_ACCEPT: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_ACCEPT, stdout, stderr: String::new() }
    }
}

/// Exit code and message for a failed command.
pub fn error_outcome(err: &Error) -> Outcome {
    Outcome { code: EXIT_ERROR, stdout: String::new(), stderr: format!("error: {err}\n") }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    /// Largest image-group order the builder will enumerate.
    #[serde(default)]
    pub core: Option<usize>,
    #[serde(default)]
    pub search_degree: Option<usize>,
    #[serde(default)]
    pub orbit_bound: Option<usize>,
    /// Largest `|B|` the oracle tries.
    #[serde(default)]
    pub oracle_max_b: Option<usize>,
}

/// A job file. Numbers are integers; `epsilon` is a `p/q` string.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub command: Option<String>,
    #[serde(default)]
    pub action: Option<ActionJson>,
    /// Rank for `conj-demo`.
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(rename = "F", default)]
    pub f: Vec<String>,
    #[serde(rename = "E", default)]
    pub e: Vec<String>,
    #[serde(default)]
    pub epsilon: Option<String>,
    #[serde(default)]
    pub strategy: Option<Strategy>,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: JobConfig =
            serde_json::from_str(text).map_err(|e| Error::Malformed { path: "config".into(), message: e.to_string() })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        JobConfig::from_json(&read(path)?)
    }

    fn validate(&self) -> Result<()> {
        let caps = [
            ("caps.core", self.caps.core),
            ("caps.search_degree", self.caps.search_degree),
            ("caps.orbit_bound", self.caps.orbit_bound),
            ("caps.oracle_max_b", self.caps.oracle_max_b),
            ("rank", self.rank),
        ];
        if let Some((name, _)) = caps.iter().find(|(_, v)| *v == Some(0)) {
            return Err(Error::Malformed { path: (*name).into(), message: "must be positive".into() });
        }
        self.epsilon()?;
        Ok(())
    }

    fn epsilon(&self) -> Result<Rational> {
        match &self.epsilon {
            Some(text) => parse_rational(text, "epsilon"),
            None => Ok(Rational::from_integer(0)),
        }
    }

    pub fn build_options(&self) -> BuildOptions {
        let d = BuildOptions::default();
        BuildOptions {
            strategy: self.strategy.unwrap_or(d.strategy),
            core_cap: self.caps.core.unwrap_or(DEFAULT_CORE_CAP),
            search_degree: self.caps.search_degree.unwrap_or(d.search_degree),
            orbit_bound: self.caps.orbit_bound.unwrap_or(d.orbit_bound),
        }
    }

    fn check_command(&self, expected: &str) -> Result<()> {
        match &self.command {
            Some(c) if c != expected => Err(Error::Malformed {
                path: "command".into(),
                message: format!("config is for {c:?}, invoked as {expected:?}"),
            }),
            _ => Ok(()),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

/// Writes through a temporary file in the target directory and renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Achieved `ε`: the larger of the defect and the fraction of `A` outside `S`.
fn epsilon_achieved(report: &VerificationReport) -> Rational {
    let outside = Rational::from_integer(1) - report.support_ratio;
    report.defect.max(outside)
}

fn emit_certificate(cert: &Certificate, out: Option<&Path>, summary: String) -> Result<Outcome> {
    let json = cert.to_json();
    match out {
        Some(path) => {
            write_atomic(path, &json)?;
            Ok(Outcome::ok(format!("{summary}certificate: {}\n", path.display())))
        }
        None => Ok(Outcome { code: EXIT_ACCEPT, stdout: json, stderr: summary }),
    }
}

/// Builds a certificate for the job, checks it, writes it and summarises.
pub fn cmd_approx(config: &JobConfig, out: Option<&Path>, strategy: Option<Strategy>) -> Result<Outcome> {
    config.check_command("approx")?;
    let action_json = config
        .action
        .as_ref()
        .ok_or_else(|| Error::Malformed { path: "action".into(), message: "missing".into() })?;
    let spec = action_json.to_spec("action")?;
    let action = Action::new(&spec)?;
    let f = parse_list(&config.f, "F", |s| action.parse_element(s))?;
    let e = parse_list(&config.e, "E", |s| action.parse_point(s))?;
    let mut options = config.build_options();
    if let Some(s) = strategy {
        options.strategy = s;
    }
    let cert = approximate(&spec, &f, &e, config.epsilon()?, &options)?;
    let report = verify(&cert)?;
    if !report.accepted() {
        return Err(Error::Internal(format!("built certificate fails verification: {report}")));
    }
    let indices: Vec<String> = cert.provenance.separators.iter().map(|t| t.index.to_string()).collect();
    let mut summary = String::new();
    writeln!(summary, "|A|: {}", cert.approx.carrier_size).unwrap();
    writeln!(summary, "|B|: {}", cert.witness.labels.len()).unwrap();
    writeln!(summary, "separator index: {}", if indices.is_empty() { "-".into() } else { indices.join(", ") }).unwrap();
    writeln!(summary, "epsilon_achieved: {}", epsilon_achieved(&report)).unwrap();
    emit_certificate(&cert, out.or(config.out.as_deref()), summary)
}

fn parse_list<T>(items: &[String], field: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse(s).map_err(|e| Error::Malformed { path: format!("{field}[{i}]"), message: e.to_string() }))
        .collect()
}

/// Verifies a certificate file, optionally at a different `ε`.
pub fn cmd_verify(path: &Path, epsilon: Option<Rational>, json: bool) -> Result<Outcome> {
    let mut cert = Certificate::from_json(&read(path)?)?;
    if let Some(eps) = epsilon {
        cert.epsilon = eps;
    }
    let report = verify(&cert)?;
    let stdout = if json { to_pretty_json(&report.to_json()) } else { report.to_string() };
    let code = if report.accepted() { EXIT_ACCEPT } else { EXIT_REJECT };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

/// Dumps the core graph of `⟨gens⟩` and, given `avoid`, a Hall separator.
pub fn cmd_subgroup(rank: usize, gens: &[String], avoid: &[String]) -> Result<Outcome> {
    let gens = parse_list(gens, "generators", |s| Word::parse(s, rank))?;
    let avoid = parse_list(avoid, "avoid", |s| Word::parse(s, rank))?;
    let graph = core_graph(&gens, rank)?;
    let mut out = String::new();
    let names: Vec<String> = gens.iter().map(Word::to_string).collect();
    writeln!(out, "subgroup: <{}>", names.join(", ")).unwrap();
    writeln!(out, "vertices: {}", graph.vertex_count()).unwrap();
    writeln!(out, "edges: {}", graph.edge_count()).unwrap();
    for (v, label, t) in graph.edges() {
        writeln!(out, "  {v} -{}-> {t}", Word::generator(rank, label)?).unwrap();
    }
    writeln!(out, "finite index: {}", graph.is_complete()).unwrap();
    if !avoid.is_empty() {
        let table = hall_completion(&graph, &avoid)?;
        writeln!(out, "separator index: {}", table.size()).unwrap();
        for (label, image) in table.images().iter().enumerate() {
            writeln!(out, "  {}: {:?}", Word::generator(rank, label + 1)?, image.to_vec()).unwrap();
        }
        for w in &avoid {
            writeln!(out, "  {w} -> coset {}", table.coset_of(w)).unwrap();
        }
    }
    Ok(Outcome::ok(out))
}

/// Conjugation action built from the biregular action by restricting along
/// the diagonal.
pub struct ConjDemo {
    pub biregular: Certificate,
    pub conjugation: Certificate,
    pub diagonal_agrees: bool,
}

pub fn conj_demo(rank: usize, f: &[String], e: &[String], options: &BuildOptions) -> Result<ConjDemo> {
    let f = parse_list(f, "F", |s| Word::parse(s, rank))?;
    let e = parse_list(e, "E", |s| Word::parse(s, rank))?;
    let pairs: Vec<GroupElement> = f.iter().map(|g| GroupElement::Pair(g.clone(), g.clone())).collect();
    let singles: Vec<GroupElement> = f.into_iter().map(GroupElement::Single).collect();
    let biregular = biregular_approx(rank, &pairs, &e, Rational::from_integer(0), options)?;
    let ActionSpec::Restricted { images, .. } = ActionSpec::conjugation(rank) else {
        unreachable!("conjugation is a restriction")
    };
    let conjugation = restrict_approx(&biregular, &images, &singles)?;
    let mut diagonal_agrees = true;
    for (g, pair) in singles.iter().zip(&pairs) {
        diagonal_agrees &= conjugation.approx.phi(g)? == biregular.approx.phi(pair)?;
    }
    Ok(ConjDemo { biregular, conjugation, diagonal_agrees })
}

pub fn cmd_conj_demo(rank: usize, f: &[String], e: &[String], options: &BuildOptions, out: Option<&Path>) -> Result<Outcome> {
    let demo = conj_demo(rank, f, e, options)?;
    let bireg = verify(&demo.biregular)?;
    let conj = verify(&demo.conjugation)?;
    let mut summary = String::new();
    writeln!(summary, "biregular |A|: {}", demo.biregular.approx.carrier_size).unwrap();
    writeln!(summary, "biregular verdict: {}", verdict(&bireg)).unwrap();
    writeln!(summary, "conjugation |B|: {}", demo.conjugation.witness.labels.len()).unwrap();
    writeln!(summary, "conjugation verdict: {}", verdict(&conj)).unwrap();
    writeln!(summary, "diagonal phi agrees: {}", demo.diagonal_agrees).unwrap();
    writeln!(summary, "epsilon_achieved: {}", epsilon_achieved(&conj)).unwrap();
    let mut outcome = emit_certificate(&demo.conjugation, out, summary)?;
    if !(bireg.accepted() && conj.accepted() && demo.diagonal_agrees) {
        outcome.code = EXIT_REJECT;
    }
    Ok(outcome)
}

fn verdict(report: &VerificationReport) -> String {
    match report.failing_clause() {
        None => "accept".into(),
        Some(clause) => format!("reject ({clause})"),
    }
}

/// Tallies from [`fuzz`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub cases: usize,
    pub build_failures: Vec<String>,
    pub mutations: usize,
    pub killed: usize,
    pub oracle_cases: usize,
    pub oracle_agreements: usize,
    pub sanity_failures: usize,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.build_failures.is_empty()
            && self.killed == self.mutations
            && self.oracle_agreements == self.oracle_cases
            && self.sanity_failures == 0
    }
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let l = rng.random_range(1..=rank as i32);
            if rng.random_bool(0.5) { l } else { -l }
        })
        .collect();
    Word::new(rank, letters).expect("letters are in range")
}

/// A random coset instance `(H generators, F, E)` with distinct points.
pub fn random_coset_instance(rng: &mut ChaCha8Rng) -> (ActionSpec, Vec<GroupElement>, Vec<Point>) {
    let rank = if rng.random_bool(0.75) { 2 } else { 3 };
    let gens = (0..rng.random_range(0..=2)).map(|_| random_word(rng, rank, 4)).collect();
    let spec = ActionSpec::Coset { rank, subgroup: gens };
    let action = Action::new(&spec).expect("coset spec is valid");
    let f = (0..rng.random_range(1..=3)).map(|_| GroupElement::Single(random_word(rng, rank, 2))).collect();
    let mut e: Vec<Point> = Vec::new();
    for _ in 0..rng.random_range(1..=3) {
        let p = action.point_of(&random_word(rng, rank, 3)).expect("rank matches");
        if !e.contains(&p) {
            e.push(p);
        }
    }
    (spec, f, e)
}

/// Random coset instances: build, mutate one entry and check the mutant is
/// rejected, and compare the oracle against the builder where it fits.
pub fn fuzz(seed: u64, n_cases: usize, oracle_max_b: usize) -> Result<FuzzSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = FuzzSummary { cases: n_cases, ..FuzzSummary::default() };
    let zero = Rational::from_integer(0);
    for case in 0..n_cases {
        let (spec, f, e) = random_coset_instance(&mut rng);
        let cert = match approximate(&spec, &f, &e, zero, &BuildOptions::default()) {
            Ok(c) => c,
            Err(err) => {
                if matches!(err.root(), Error::Internal(_)) {
                    summary.sanity_failures += 1;
                }
                summary.build_failures.push(format!("case {case}: {err}"));
                continue;
            }
        };
        let mutations = invalidating_mutations(&cert)?;
        if let Some(m) = mutations.choose(&mut rng) {
            summary.mutations += 1;
            let reparsed = Certificate::from_json(&m.certificate.to_json())?;
            if verify(&reparsed)?.failing_clause().is_some() {
                summary.killed += 1;
            }
        }
        let action = Action::new(&spec)?;
        let labels = cert.witness.labels.len();
        if cert.approx.carrier_size <= 8 && e.len() <= 3 && labels <= oracle_max_b {
            summary.oracle_cases += 1;
            if let Some(w) = brute_force_witness(&action, &cert.approx, &f, &e, zero, labels)? {
                if check_orbit_witness(&action, &cert.approx, &f, &e, &w, zero)?.orbit_ok() {
                    summary.oracle_agreements += 1;
                }
            }
        }
    }
    Ok(summary)
}

pub fn cmd_fuzz(seed: u64, n_cases: usize, oracle_max_b: Option<usize>, json: bool) -> Result<Outcome> {
    let summary = fuzz(seed, n_cases, oracle_max_b.unwrap_or(ORACLE_MAX_B).min(ORACLE_MAX_B))?;
    let stdout = if json {
        to_pretty_json(&summary)
    } else {
        let mut out = format!("cases: {}\n", summary.cases);
        if summary.cases > 0 {
            writeln!(out, "kill-rate {}/{}", summary.killed, summary.mutations).unwrap();
            writeln!(out, "oracle agreement {}/{}", summary.oracle_agreements, summary.oracle_cases).unwrap();
            writeln!(out, "sanity check failures: {}", summary.sanity_failures).unwrap();
            for failure in &summary.build_failures {
                writeln!(out, "build failure: {failure}").unwrap();
            }
        }
        out
    };
    let code = if summary.passed() { EXIT_ACCEPT } else { EXIT_REJECT };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_validation() {
        let config = JobConfig::from_json(r#"{"action": {"kind": "biregular", "rank": 2}}"#).unwrap();
        assert_eq!(config.epsilon().unwrap(), Rational::from_integer(0));
        assert_eq!(config.build_options(), BuildOptions::default());
        assert!(JobConfig::from_json(r#"{"epsilon": "-1/2"}"#).is_err());
        assert!(JobConfig::from_json(r#"{"seed": 1, "colour": "red"}"#).is_err());
        let literal = JobConfig::from_json(r#"{"strategy": "literal", "caps": {"core": 50}}"#).unwrap();
        assert_eq!(literal.build_options().strategy, Strategy::Literal);
        assert_eq!(literal.build_options().core_cap, 50);
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, "first").unwrap();
        write_atomic(&path, "second").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn empty_job_gives_trivial_certificate() {
        let config = JobConfig::from_json(r#"{"action": {"kind": "coset", "rank": 2, "subgroup": ["ab"]}}"#).unwrap();
        let out = cmd_approx(&config, None, None).unwrap();
        assert!(out.stderr.contains("|A|: 1"));
        assert!(out.stderr.contains("separator index: 1"));
    }

    #[test]
    fn fuzz_is_deterministic() {
        assert_eq!(fuzz(5, 6, ORACLE_MAX_B).unwrap(), fuzz(5, 6, ORACLE_MAX_B).unwrap());
        assert_eq!(fuzz(5, 0, ORACLE_MAX_B).unwrap().mutations, 0);
    }
}
