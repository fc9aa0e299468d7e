//! Experimental condition labels shared by the correction and rating data.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Form of the subject inside the *than* clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubjectForm {
    Pronoun,
    Np,
}

/// Grammatical number of the *than*-clause subject; `Control` marks the
/// acceptable baseline sentence of an item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    Singular,
    Plural,
    Control,
}

impl SubjectForm {
    pub fn as_str(self) -> &'static str {
        match self {
            SubjectForm::Pronoun => "pronoun",
            SubjectForm::Np => "np",
        }
    }
}

impl Number {
    pub fn as_str(self) -> &'static str {
        match self {
            Number::Singular => "singular",
            Number::Plural => "plural",
            Number::Control => "control",
        }
    }
}

impl fmt::Display for SubjectForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubjectForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pronoun" => Ok(SubjectForm::Pronoun),
            "np" | "noun_phrase" | "noun phrase" => Ok(SubjectForm::Np),
            other => Err(format!("unknown subject form {other:?}")),
        }
    }
}

impl FromStr for Number {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "singular" | "sg" => Ok(Number::Singular),
            "plural" | "pl" => Ok(Number::Plural),
            "control" => Ok(Number::Control),
            other => Err(format!("unknown number {other:?}")),
        }
    }
}

/// One cell of the form-by-number design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Condition {
    pub subject_form: SubjectForm,
    pub number: Number,
}

impl Condition {
    pub fn new(subject_form: SubjectForm, number: Number) -> Self {
        Self { subject_form, number }
    }

    pub fn is_control(self) -> bool {
        self.number == Number::Control
    }

    /// The acceptable baseline cell for this condition.
    pub fn control(self) -> Self {
        Self::new(self.subject_form, Number::Control)
    }

    /// The four anomalous cells in a fixed order.
    pub fn illusory() -> [Condition; 4] {
        [
            Condition::new(SubjectForm::Pronoun, Number::Singular),
            Condition::new(SubjectForm::Pronoun, Number::Plural),
            Condition::new(SubjectForm::Np, Number::Singular),
            Condition::new(SubjectForm::Np, Number::Plural),
        ]
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.subject_form, self.number)
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (form, number) = s
            .split_once('_')
            .ok_or_else(|| format!("condition {s:?} is not form_number"))?;
        Ok(Condition::new(form.parse()?, number.parse()?))
    }
}
