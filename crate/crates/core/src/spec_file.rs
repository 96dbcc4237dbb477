//! The JSON description of an algebra: basis, differential, form, structure constants on `ΠV`,
//! optional Hodge data and run options. Scalars are canonical `"p/q"` strings.

use serde::{Deserialize, Serialize};

use crate::ainfty::{AInfinityStructure, OpConstants};
use crate::error::{Error, Result};
use crate::graded::{BasisVector, BilinearForm, DgSpace, GradedSpace, Parity, Symmetry};
use crate::hodge::HodgeData;
use crate::matrix::Matrix;
use crate::scalar;

/// Cutoff used when neither the file nor the caller picks one.
pub const MAX_DEFAULT_CUTOFF: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpecFile {
    pub basis: Vec<BasisVector>,
    pub d: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormSpec>,
    #[serde(default)]
    pub m: Vec<OpConstants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge: Option<HodgeSpec>,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetrySpec {
    Symmetric,
    Antisymmetric,
}

impl From<SymmetrySpec> for Symmetry {
    fn from(s: SymmetrySpec) -> Self {
        match s {
            SymmetrySpec::Symmetric => Symmetry::Symmetric,
            SymmetrySpec::Antisymmetric => Symmetry::Antisymmetric,
        }
    }
}

impl From<Symmetry> for SymmetrySpec {
    fn from(s: Symmetry) -> Self {
        match s {
            Symmetry::Symmetric => SymmetrySpec::Symmetric,
            Symmetry::Antisymmetric => SymmetrySpec::Antisymmetric,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub parity: Parity,
    pub symmetry: SymmetrySpec,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HodgeSpec {
    pub s: Vec<Vec<String>>,
    pub t: Vec<Vec<String>>,
    #[serde(default)]
    pub harmonious: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub require_harmonious: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Options {
    pub fn is_empty(&self) -> bool {
        self == &Options::default()
    }
}

/// Everything a file describes, as validated module types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedSpec {
    pub v: DgSpace,
    pub form: BilinearForm,
    pub structure: AInfinityStructure,
    pub hodge: Option<HodgeData>,
    pub options: Options,
}

fn parse_error(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        field: field.into(),
        message: message.into(),
    }
}

/// Parses JSON, naming the offending field path on failure.
pub fn parse(text: &str) -> Result<AlgebraSpecFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let field = if path == "." {
            "(root)".to_string()
        } else {
            path
        };
        parse_error(field, inner.to_string())
    })
}

pub fn to_json(spec: &AlgebraSpecFile, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(spec).expect("spec files serialize")
    } else {
        serde_json::to_string(spec).expect("spec files serialize")
    }
}

fn parse_matrix(field: &str, rows: &[Vec<String>], n: usize) -> Result<Matrix> {
    if rows.len() != n {
        return Err(parse_error(
            field,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    let mut m = Matrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(parse_error(
                format!("{field}[{i}]"),
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] =
                scalar::parse(x).map_err(|msg| parse_error(format!("{field}[{i}][{j}]"), msg))?;
        }
    }
    Ok(m)
}

fn in_field(field: String) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse {
            field: inner,
            message,
        } => parse_error(format!("{field}.{inner}"), message),
        other => parse_error(field.clone(), other.to_string()),
    }
}

impl AlgebraSpecFile {
    /// Highest arity listed in `m`, or 1.
    pub fn top_arity(&self) -> usize {
        self.m.iter().map(|op| op.n).max().unwrap_or(1)
    }

    /// Highest listed arity plus one, capped at [`MAX_DEFAULT_CUTOFF`] unless the file itself
    /// goes higher, and never below 2.
    pub fn default_cutoff(&self) -> usize {
        let top = self.top_arity();
        (top + 1).min(MAX_DEFAULT_CUTOFF).max(top).max(2)
    }

    /// Builds validated module types. `cutoff` overrides the file's option and the default.
    pub fn load(&self, cutoff: Option<usize>) -> Result<LoadedSpec> {
        let space = GradedSpace::new(self.basis.clone()).map_err(in_field("basis".into()))?;
        let n = space.dim();
        let d = parse_matrix("d", &self.d, n)?;
        let v = DgSpace::new(space.clone(), d).map_err(in_field("d".into()))?;

        let form = match &self.form {
            None => BilinearForm::zero(&space),
            Some(f) => {
                let g = parse_matrix("form.matrix", &f.matrix, n)?;
                BilinearForm::new(space.clone(), f.parity, f.symmetry.into(), g)
                    .map_err(in_field("form".into()))?
            }
        };

        let cutoff = cutoff
            .or(self.options.cutoff)
            .unwrap_or_else(|| self.default_cutoff());
        if cutoff < 2 {
            return Err(parse_error("options.cutoff", "cutoff must be at least 2"));
        }
        let shifted = space.reversed();
        let mut ops = Vec::new();
        for (k, op) in self.m.iter().enumerate() {
            if op.n < 2 {
                return Err(parse_error(
                    format!("m[{k}].n"),
                    "arities start at 2; m_1 is the differential",
                ));
            }
            if op.n > cutoff {
                return Err(parse_error(
                    format!("m[{k}].n"),
                    format!("arity {} exceeds the cutoff {cutoff}", op.n),
                ));
            }
            ops.push(
                op.to_map(&shifted, Parity::Odd)
                    .map_err(in_field(format!("m[{k}]")))?,
            );
        }
        let structure =
            AInfinityStructure::new(v.clone(), cutoff, ops).map_err(in_field("m".into()))?;

        let hodge = match &self.hodge {
            None => None,
            Some(h) => {
                let s = parse_matrix("hodge.s", &h.s, n)?;
                let t = parse_matrix("hodge.t", &h.t, n)?;
                Some(
                    HodgeData::from_matrices(&v, s, t, h.harmonious)
                        .map_err(in_field("hodge".into()))?,
                )
            }
        };
        Ok(LoadedSpec {
            v,
            form,
            structure,
            hodge,
            options: self.options.clone(),
        })
    }
}

pub fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(scalar::format).collect())
        .collect()
}

/// The file describing an A∞-structure, its form and optional Hodge data.
pub fn from_parts(
    structure: &AInfinityStructure,
    form: &BilinearForm,
    hodge: Option<&HodgeData>,
    options: Options,
) -> AlgebraSpecFile {
    let v = structure.underlying();
    let has_form =
        !form.is_zero() || form.parity() != Parity::Even || form.symmetry() != Symmetry::Symmetric;
    AlgebraSpecFile {
        basis: v.space().basis().to_vec(),
        d: matrix_strings(v.d().matrix()),
        form: has_form.then(|| FormSpec {
            parity: form.parity(),
            symmetry: form.symmetry().into(),
            matrix: matrix_strings(form.gram()),
        }),
        m: structure
            .higher_ops()
            .iter()
            .filter(|m| !m.is_zero())
            .map(OpConstants::from_map)
            .collect(),
        hodge: hodge.map(|h| HodgeSpec {
            s: matrix_strings(h.s.matrix()),
            t: matrix_strings(h.t.matrix()),
            harmonious: h.harmonious,
        }),
        options,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FROBENIUS: &str = r#"{
        "basis": [{"name": "1", "parity": 0}, {"name": "x", "parity": 0}],
        "d": [["0", "0"], ["0", "0"]],
        "form": {"parity": 0, "symmetry": "symmetric", "matrix": [["0", "1"], ["1", "0"]]},
        "m": [{"n": 2, "entries": [{"in": [0, 0], "out": 0, "c": "1"}, {"in": [0, 1], "out": 1, "c": "1"}, {"in": [1, 0], "out": 1, "c": "1"}]}]
    }"#;

    #[test]
    fn loads_a_frobenius_algebra() {
        let spec = parse(FROBENIUS).unwrap();
        assert_eq!(spec.default_cutoff(), 3);
        let loaded = spec.load(None).unwrap();
        assert_eq!(loaded.structure.cutoff(), 3);
        assert!(loaded.form.is_nondegenerate());
    }

    #[test]
    fn malformed_scalar_names_the_field() {
        let text = FROBENIUS.replace(
            r#"{"in": [0, 1], "out": 1, "c": "1"}"#,
            r#"{"in": [0, 1], "out": 1, "c": "1/0"}"#,
        );
        let err = parse(&text).unwrap().load(None).unwrap_err();
        let Error::Parse { field, .. } = err else {
            panic!("{err:?}")
        };
        assert_eq!(field, "m[0].entries[1].c");
    }

    #[test]
    fn structural_errors_carry_a_path() {
        let text = FROBENIUS.replace(
            r#""parity": 0}, {"name": "x""#,
            r#""parity": 2}, {"name": "x""#,
        );
        let Error::Parse { field, .. } = parse(&text).unwrap_err() else {
            panic!()
        };
        assert_eq!(field, "basis[0].parity");
        let Error::Parse { field, .. } =
            parse(r#"{"basis": [], "d": [], "extra": 1}"#).unwrap_err()
        else {
            panic!()
        };
        assert_eq!(field, "extra");
    }

    #[test]
    fn bad_matrix_entries() {
        let text = FROBENIUS.replace(
            r#""d": [["0", "0"], ["0", "0"]]"#,
            r#""d": [["0", "0"], ["0", "2/4"]]"#,
        );
        let Error::Parse { field, .. } = parse(&text).unwrap().load(None).unwrap_err() else {
            panic!()
        };
        assert_eq!(field, "d[1][1]");
    }

    #[test]
    fn round_trip() {
        let spec = parse(FROBENIUS).unwrap();
        let again = parse(&to_json(&spec, true)).unwrap();
        assert_eq!(spec, again);
        let loaded = spec.load(None).unwrap();
        let rebuilt = from_parts(&loaded.structure, &loaded.form, None, Options::default());
        assert_eq!(rebuilt, spec);
    }

    #[test]
    fn default_cutoff_caps() {
        let mut spec = parse(FROBENIUS).unwrap();
        spec.m.clear();
        assert_eq!(spec.default_cutoff(), 2);
        spec.m.push(OpConstants {
            n: 6,
            entries: vec![],
        });
        assert_eq!(spec.default_cutoff(), 6);
    }
}
