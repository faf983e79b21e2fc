//! Three-valued verdicts with checkable certificates.

use crate::field::El;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Yes => write!(f, "yes"),
            Answer::No => write!(f, "no"),
            Answer::Unknown => write!(f, "unknown"),
        }
    }
}

/// Leaf-by-leaf record of an anisotropy certification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceNode {
    /// Decided over the finite base field.
    FiniteField(String),
    /// Binary block [a,b] with ab certified outside ℘.
    BinaryOutsideWp(String),
    /// Totally singular with F²-independent coefficients.
    TotallySingularRank(String),
    /// Residue split at a variable; both residues anisotropic.
    ResidueSplit { var: String, twisted: bool, first: Box<TraceNode>, second: Box<TraceNode> },
    /// The zero-dimensional form.
    Empty,
    /// Decision transported across a rational rewrite of insep layers.
    Rewrite(Box<TraceNode>),
    Note(String),
}

impl TraceNode {
    pub fn render(&self, indent: usize) -> String {
        let pad = "  ".repeat(indent);
        match self {
            TraceNode::FiniteField(s) => format!("{pad}finite field: {s}"),
            TraceNode::BinaryOutsideWp(s) => format!("{pad}binary block: {s}"),
            TraceNode::TotallySingularRank(s) => format!("{pad}totally singular: {s}"),
            TraceNode::ResidueSplit { var, twisted, first, second } => {
                let tw = if *twisted { " (scaled by the uniformizer)" } else { "" };
                format!(
                    "{pad}residue split at {var}{tw}\n{}\n{}",
                    first.render(indent + 1),
                    second.render(indent + 1)
                )
            }
            TraceNode::Empty => format!("{pad}empty form"),
            TraceNode::Rewrite(inner) => {
                format!("{pad}rational rewrite of insep layers\n{}", inner.render(indent + 1))
            }
            TraceNode::Note(s) => format!("{pad}{s}"),
        }
    }
}

impl fmt::Display for TraceNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(0))
    }
}

#[derive(Clone, Debug)]
pub enum Certificate {
    /// A verified isotropic (or representing) vector.
    Vector(Vec<El>),
    /// A similarity or weak-domination scalar.
    Scalar(El),
    /// A domination embedding: columns are images of the basis vectors.
    Embedding(Vec<Vec<El>>),
    /// An anisotropy trace with decided leaves.
    Trace(TraceNode),
    Note(String),
}

impl Certificate {
    pub fn describe(&self) -> String {
        match self {
            Certificate::Vector(v) => {
                let coords: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                format!("vector ({})", coords.join(", "))
            }
            Certificate::Scalar(c) => format!("scalar {c}"),
            Certificate::Embedding(cols) => {
                let cs: Vec<String> = cols
                    .iter()
                    .map(|col| {
                        let coords: Vec<String> = col.iter().map(|e| e.to_string()).collect();
                        format!("({})", coords.join(", "))
                    })
                    .collect();
                format!("embedding [{}]", cs.join(", "))
            }
            Certificate::Trace(t) => format!("trace:\n{}", t.render(1)),
            Certificate::Note(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub answer: Answer,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    pub fn yes(c: Certificate) -> Verdict {
        Verdict { answer: Answer::Yes, certificate: Some(c) }
    }

    pub fn no(c: Certificate) -> Verdict {
        Verdict { answer: Answer::No, certificate: Some(c) }
    }

    pub fn bare(answer: Answer) -> Verdict {
        Verdict { answer, certificate: None }
    }

    pub fn unknown() -> Verdict {
        Verdict { answer: Answer::Unknown, certificate: None }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    pub fn is_no(&self) -> bool {
        self.answer == Answer::No
    }

    pub fn is_unknown(&self) -> bool {
        self.answer == Answer::Unknown
    }

    /// Negate the answer, keeping the certificate.
    pub fn flip(self) -> Verdict {
        let answer = match self.answer {
            Answer::Yes => Answer::No,
            Answer::No => Answer::Yes,
            Answer::Unknown => Answer::Unknown,
        };
        Verdict { answer, certificate: self.certificate }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.answer)?;
        if let Some(c) = &self.certificate {
            write!(f, " [{}]", c.describe())?;
        }
        Ok(())
    }
}
