//! The four batch commands as pure functions from input text to a JSON report and exit status.

use serde::Serialize;
use serde_json::{json, Value};

use crate::ainfty::{check_cyclic, check_form, check_stasheff};
use crate::error::Error;
use crate::graded::Subspace;
use crate::hodge::{self, HodgeData};
use crate::spec_file::{self, from_parts, matrix_strings, LoadedSpec, Options};
use crate::transfer::{minimal_model, transfer};
use crate::tree::enumerate_trees;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    CheckFailed,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::CheckFailed => 1,
            Status::InputError => 2,
        }
    }

    fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::CheckFailed
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub report: Value,
    pub status: Status,
}

impl CommandOutput {
    pub fn render(&self, pretty: bool) -> String {
        let mut s = if pretty {
            serde_json::to_string_pretty(&self.report).expect("reports serialize")
        } else {
            serde_json::to_string(&self.report).expect("reports serialize")
        };
        s.push('\n');
        s
    }
}

fn failure(e: &Error) -> CommandOutput {
    let (status, kind) = match e {
        Error::Parse { .. } => (Status::InputError, "input"),
        _ => (Status::CheckFailed, "check"),
    };
    let mut error = json!({ "kind": kind, "message": e.to_string() });
    if let Error::Parse { field, .. } = e {
        error["field"] = json!(field);
    }
    CommandOutput {
        report: json!({ "pass": false, "error": error }),
        status,
    }
}

fn load(text: &str, cutoff: Option<usize>) -> Result<LoadedSpec, Error> {
    spec_file::parse(text)?.load(cutoff)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn run(f: impl FnOnce() -> Result<CommandOutput, Error>) -> CommandOutput {
    f().unwrap_or_else(|e| failure(&e))
}

/// Form, Stasheff and cyclicity checks, plus the Hodge axioms when the file has Hodge data.
pub fn cmd_verify(text: &str, cutoff: Option<usize>) -> CommandOutput {
    run(|| {
        let spec = load(text, cutoff)?;
        let form = check_form(&spec.v, &spec.form)?;
        let stasheff = check_stasheff(&spec.structure)?;
        let cyclic = check_cyclic(&spec.structure, &spec.form)?;
        let mut pass = form.passes() && stasheff.passes() && cyclic.passes();
        let mut report = json!({
            "cutoff": spec.structure.cutoff(),
            "form": to_value(&form),
            "stasheff": to_value(&stasheff),
            "cyclic": to_value(&cyclic),
        });
        if let Some(h) = &spec.hodge {
            let axioms = hodge::verify(h, &spec.v, &spec.form)?;
            pass &= axioms.passes();
            report["hodge"] = to_value(&axioms);
        }
        report["pass"] = json!(pass);
        Ok(CommandOutput {
            report,
            status: Status::from_pass(pass),
        })
    })
}

fn subspace_strings(s: &Subspace) -> Vec<Vec<String>> {
    s.basis()
        .iter()
        .map(|v| v.iter().map(crate::scalar::format).collect())
        .collect()
}

/// A harmonious Hodge decomposition with its axiom report.
pub fn cmd_build_hodge(text: &str) -> CommandOutput {
    run(|| {
        let spec = load(text, None)?;
        let form = check_form(&spec.v, &spec.form)?;
        if !form.passes() {
            return Ok(CommandOutput {
                report: json!({ "pass": false, "form": to_value(&form) }),
                status: Status::CheckFailed,
            });
        }
        let dec = hodge::harmonious_decomposition(&spec.v, &spec.form)?;
        let h = hodge::from_decomposition(&dec, &spec.v, &spec.form)?;
        let axioms = hodge::verify(&h, &spec.v, &spec.form)?;
        let pass = axioms.passes();
        let report = json!({
            "s": matrix_strings(h.s.matrix()),
            "t": matrix_strings(h.t.matrix()),
            "harmonious": h.harmonious,
            "decomposition": {
                "boundaries": subspace_strings(&dec.boundaries),
                "isotropic": subspace_strings(&dec.isotropic),
                "harmonic": subspace_strings(&dec.harmonic),
            },
            "report": to_value(&axioms),
            "pass": pass,
        });
        Ok(CommandOutput {
            report,
            status: Status::from_pass(pass),
        })
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TransferOptions {
    pub cutoff: Option<usize>,
    pub require_harmonious: Option<bool>,
    pub parallel: bool,
}

/// The minimal model on the harmonic basis with its verification report, or with
/// `require_harmonious = false` the raw transferred structure on `V`.
pub fn cmd_transfer(text: &str, options: TransferOptions) -> CommandOutput {
    run(|| {
        let spec = load(text, options.cutoff)?;
        let require = options
            .require_harmonious
            .or(spec.options.require_harmonious)
            .unwrap_or(true);
        let h: HodgeData = match &spec.hodge {
            Some(h) => h.clone(),
            None => hodge::build_harmonious(&spec.v, &spec.form)?,
        };
        let cutoff = spec.structure.cutoff();
        if require {
            let model = minimal_model(&spec.structure, &spec.form, &h, cutoff, options.parallel)?;
            let pass = model.report.passes();
            let file = from_parts(&model.structure, &model.form, None, Options::default());
            let report = json!({
                "cutoff": cutoff,
                "model": to_value(&file),
                "harmonic_basis": {
                    "names": model.basis.space.basis().iter().map(|b| b.name.clone()).collect::<Vec<_>>(),
                    "vectors": subspace_strings(&model.basis.vectors),
                },
                "report": to_value(&model.report),
                "pass": pass,
            });
            Ok(CommandOutput {
                report,
                status: Status::from_pass(pass),
            })
        } else {
            let out = transfer(&spec.structure, &h, cutoff, options.parallel)?;
            let stasheff = check_stasheff(&out.on_v)?;
            let pass = stasheff.passes();
            let file = from_parts(&out.on_v, &spec.form, None, Options::default());
            let report = json!({
                "cutoff": cutoff,
                "structure": to_value(&file),
                "stasheff": to_value(&stasheff),
                "pass": pass,
            });
            Ok(CommandOutput {
                report,
                status: Status::from_pass(pass),
            })
        }
    })
}

/// Tree count for `n` leaves, optionally with the trees in canonical form.
pub fn cmd_trees(n: usize, list: bool) -> CommandOutput {
    match enumerate_trees(n) {
        Err(e) => failure(&Error::Parse {
            field: "n".into(),
            message: e.to_string(),
        }),
        Ok(trees) => {
            let mut report = json!({ "n": n, "count": trees.len() });
            if list {
                report["trees"] = json!(trees.iter().map(|t| t.canonical()).collect::<Vec<_>>());
            }
            CommandOutput {
                report,
                status: Status::Pass,
            }
        }
    }
}
