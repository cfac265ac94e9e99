/// One verified identity: its residual, the dimensions it was checked on,
/// and the verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckEntry {
    pub check_id: String,
    pub residual: f64,
    pub dims: Vec<usize>,
    pub pass: bool,
    pub note: Option<String>,
}

impl CheckEntry {
    pub fn new(check_id: impl Into<String>, residual: f64, dims: Vec<usize>, pass: bool) -> Self {
        CheckEntry {
            check_id: check_id.into(),
            residual,
            dims,
            pass,
            note: None,
        }
    }

    /// Entry that passes iff `residual <= bound`.
    pub fn bounded(check_id: impl Into<String>, residual: f64, dims: Vec<usize>, bound: f64) -> Self {
        CheckEntry::new(check_id, residual, dims, residual <= bound)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Ordered list of check entries; passes iff every entry passes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub entries: Vec<CheckEntry>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.residual))
    }

    pub fn get(&self, check_id: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.check_id == check_id)
    }
}
