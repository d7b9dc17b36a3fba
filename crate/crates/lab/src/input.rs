//! Experiment inputs: built-in fixtures, files, or inline objects.

use std::path::Path;

use abtorsion::alexmod::first_nonzero_alexander;
use abtorsion::foxcalc::{alexander_matrix_from_presentation, builtin_fixture, GroupPresentation};
use abtorsion::{ChainComplex, LaurentMat, LaurentPoly, Presentation};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

/// A fixture name or file path, or one of the inline forms.
///
/// Files ending in `.json` hold one of the inline objects; other files hold
/// a group presentation in the `gens: ...; rels: ...` format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputSpec {
    Named(String),
    Polynomial {
        polynomial: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        num_vars: Option<usize>,
    },
    Group {
        group: String,
    },
    Presentation {
        presentation: Presentation,
    },
    Complex {
        complex: ChainComplex,
    },
    Matrix {
        matrix: LaurentMat,
    },
}

/// A resolved input.
#[derive(Clone, Debug)]
pub struct Subject {
    pub label: String,
    /// The text the input was read from; part of every cache key.
    pub source: String,
    pub presentation: Presentation,
    pub complex: ChainComplex,
    /// Set for polynomial inputs, whose measure is taken as given.
    pub polynomial: Option<LaurentPoly>,
    pub from_group: bool,
}

impl Subject {
    fn from_polynomial(label: String, source: String, p: LaurentPoly) -> LabResult<Self> {
        Ok(Self {
            label,
            source,
            presentation: Presentation::diagonal(p.num_vars(), vec![p.clone()]).map_err(LabError::input)?,
            complex: ChainComplex::resolution(&p),
            polynomial: Some(p),
            from_group: false,
        })
    }

    fn from_group(label: String, source: String, g: &GroupPresentation) -> LabResult<Self> {
        let (presentation, complex) = alexander_matrix_from_presentation(g).map_err(LabError::input)?;
        Ok(Self { label, source, presentation, complex, polynomial: None, from_group: true })
    }

    fn from_presentation(label: String, source: String, p: Presentation) -> Self {
        Self { label, source, complex: ChainComplex::from_presentation(&p), presentation: p, polynomial: None, from_group: false }
    }

    fn from_complex(label: String, source: String, c: ChainComplex) -> Self {
        let d1 = c.differential(1).expect("nonempty complex").clone();
        Self { label, source, presentation: Presentation::new(d1), complex: c, polynomial: None, from_group: false }
    }

    pub fn num_vars(&self) -> usize {
        self.complex.num_vars()
    }

    /// The polynomial whose measure the convergence experiments target: the
    /// input polynomial, or the first nonzero Alexander polynomial.
    pub fn delta(&self) -> LaurentPoly {
        match &self.polynomial {
            Some(p) => p.clone(),
            None => first_nonzero_alexander(&self.presentation).1,
        }
    }

    /// Homology degree of [`crate::config::Route::Complex`] by default.
    pub fn default_degree(&self) -> usize {
        usize::from(self.from_group)
    }
}

impl InputSpec {
    /// Resolves fixture names, then paths relative to `base`.
    pub fn resolve(&self, base: &Path) -> LabResult<Subject> {
        match self {
            Self::Named(name) => {
                if let Ok(f) = builtin_fixture(name) {
                    return Subject::from_group(f.name, f.text.clone(), &f.presentation);
                }
                let path = base.join(name);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| LabError::Input(format!("`{name}` is neither a fixture nor a readable file: {e}")))?;
                if path.extension().is_some_and(|e| e == "json") {
                    let spec: InputSpec = serde_json::from_str(&text).map_err(|e| LabError::Input(format!("{}: {e}", path.display())))?;
                    if matches!(spec, Self::Named(_)) {
                        return Err(LabError::Input(format!("{}: nested input names are not followed", path.display())));
                    }
                    let mut s = spec.resolve(base)?;
                    s.label = name.clone();
                    s.source = text;
                    Ok(s)
                } else {
                    let g: GroupPresentation = text.trim().parse().map_err(LabError::input)?;
                    Subject::from_group(name.clone(), text, &g)
                }
            }
            inline => {
                let label = match inline {
                    Self::Polynomial { polynomial, .. } => polynomial.clone(),
                    Self::Group { group } => group.clone(),
                    _ => "inline".to_string(),
                };
                let source = serde_json::to_string(inline).expect("serializable input");
                match inline {
                    Self::Named(_) => unreachable!(),
                    Self::Polynomial { polynomial, num_vars } => {
                        let p = match num_vars {
                            Some(m) => LaurentPoly::parse_with_vars(polynomial, *m).map_err(LabError::input)?,
                            None => polynomial.parse().map_err(LabError::input)?,
                        };
                        if p.is_zero() {
                            return Err(LabError::Input("zero polynomial".into()));
                        }
                        Subject::from_polynomial(label, source, p)
                    }
                    Self::Group { group } => Subject::from_group(label, source, &group.parse().map_err(LabError::input)?),
                    Self::Presentation { presentation } => Ok(Subject::from_presentation(label, source, presentation.clone())),
                    Self::Matrix { matrix } => Ok(Subject::from_presentation(label, source, Presentation::new(matrix.clone()))),
                    Self::Complex { complex } => Ok(Subject::from_complex(label, source, complex.clone())),
                }
            }
        }
    }
}
