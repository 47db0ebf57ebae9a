//! Verification reports: every check enumerates what it looked at, never
//! aborts on first failure, and states the truncation caps it ran under.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Weight / lambda-order / arity caps under which a verification is
/// certified. The engine computes exactly; the caps bound what gets
/// enumerated and are printed in every report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub max_weight: usize,
    pub max_lambda: usize,
    pub max_arity: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            max_weight: 4,
            max_lambda: 3,
            max_arity: 4,
        }
    }
}

impl fmt::Display for TruncationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "W={} L={} A={}",
            self.max_weight, self.max_lambda, self.max_arity
        )
    }
}

/// One verified statement: a subject label, its verdict, and the offending
/// value when the verdict is a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    pub subject: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

/// Outcome of one named check, with all items enumerated in deterministic
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub policy: TruncationPolicy,
    pub notes: Vec<String>,
    pub items: Vec<CheckItem>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, policy: TruncationPolicy) -> Self {
        VerificationReport {
            check: check.into(),
            policy,
            notes: Vec::new(),
            items: Vec::new(),
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn push_pass(&mut self, subject: impl Into<String>) {
        self.items.push(CheckItem {
            subject: subject.into(),
            pass: true,
            value: None,
        });
    }

    pub fn push_fail(&mut self, subject: impl Into<String>, value: impl Into<String>) {
        self.items.push(CheckItem {
            subject: subject.into(),
            pass: false,
            value: Some(value.into()),
        });
    }

    pub fn push(&mut self, subject: impl Into<String>, pass: bool, value: Option<String>) {
        self.items.push(CheckItem {
            subject: subject.into(),
            pass,
            value,
        });
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failure_count(&self) -> usize {
        self.items.iter().filter(|i| !i.pass).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.pass)
    }
}

/// Machine- and human-renderable bundle of report sections for one input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool_version: String,
    pub input_digest: String,
    pub policy: TruncationPolicy,
    pub sections: Vec<VerificationReport>,
}

impl ReportFile {
    pub fn new(input_digest: impl Into<String>, policy: TruncationPolicy) -> Self {
        ReportFile {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: input_digest.into(),
            policy,
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, section: VerificationReport) {
        self.sections.push(section);
    }

    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.passed())
    }

    pub fn failure_count(&self) -> usize {
        self.sections.iter().map(|s| s.failure_count()).sum()
    }

    /// Human-readable rendering. Byte-deterministic for identical inputs
    /// and tool versions: no timestamps, no map iteration surprises.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("tool: bigbracket {}\n", self.tool_version));
        out.push_str(&format!("input: sha256:{}\n", self.input_digest));
        out.push_str(&format!("policy: {}\n", self.policy));
        for section in &self.sections {
            out.push_str(&format!("check: {}\n", section.check));
            out.push_str(&format!("  policy: {}\n", section.policy));
            for note in &section.notes {
                out.push_str(&format!("  note: {}\n", note));
            }
            out.push_str(&format!(
                "  status: {}\n",
                if section.passed() { "pass" } else { "FAIL" }
            ));
            out.push_str(&format!("  checked: {}\n", section.items.len()));
            for item in section.failures() {
                out.push_str(&format!(
                    "  witness: {} value: {}\n",
                    item.subject,
                    item.value.as_deref().unwrap_or("-")
                ));
            }
        }
        out.push_str(&format!(
            "summary: {} sections={} failures={}\n",
            if self.passed() { "pass" } else { "FAIL" },
            self.sections.len(),
            self.failure_count()
        ));
        out
    }

    /// Machine-readable rendering (JSON, stable field order).
    pub fn render_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
