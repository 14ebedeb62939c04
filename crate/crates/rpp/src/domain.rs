//! Shared vocabulary types: interned items, user records, candidate sets,
//! prompt patterns and joint actions.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DomainError {
    #[error("empty catalog: no titles to intern")]
    EmptyCatalog,
    #[error("row {row}: empty title")]
    EmptyTitle { row: usize },
    #[error("row {row}: title contains a line break: {title:?}")]
    TitleLineBreak { row: usize, title: String },
    #[error("joint action is missing pattern {0}")]
    MissingPattern(PatternKind),
    #[error("action index {index} out of range for pattern {pattern} (size {size})")]
    ActionOutOfRange {
        pattern: PatternKind,
        index: usize,
        size: usize,
    },
    #[error("candidate set has {got} items, expected {want}")]
    CandidateCount { got: usize, want: usize },
    #[error("candidate set contains duplicate item id {0}")]
    DuplicateCandidate(u32),
    #[error("ground truth position {pos} out of range for {len} candidates")]
    GroundTruthOutOfRange { pos: usize, len: usize },
    #[error("user {user}: history has {len} entries, need at least {min}")]
    HistoryTooShort { user: u32, len: usize, min: usize },
}

/// Interned item identifier, dense from 0 in ingestion order.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct ItemId(pub u32);

/// Interned user identifier.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct UserId(pub u32);

/// An item as used in prompts: id plus its display title.
///
/// Titles never contain line breaks; the reply parser splits on them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemRef {
    pub id: ItemId,
    pub title: String,
}

/// Bijective title <-> id interner. Duplicate titles map to the same id.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ItemCatalog {
    titles: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, ItemId>,
}

impl ItemCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Intern one title, validating the no-line-break rule. `row` is only
    /// used for error reporting.
    pub fn intern(&mut self, title: &str, row: usize) -> Result<ItemId, DomainError> {
        if title.is_empty() {
            return Err(DomainError::EmptyTitle { row });
        }
        if title.contains('\n') || title.contains('\r') {
            return Err(DomainError::TitleLineBreak {
                row,
                title: title.to_owned(),
            });
        }
        if let Some(&id) = self.index.get(title) {
            return Ok(id);
        }
        let id = ItemId(self.titles.len() as u32);
        self.titles.push(title.to_owned());
        self.index.insert(title.to_owned(), id);
        Ok(id)
    }

    pub fn lookup(&self, title: &str) -> Option<ItemId> {
        self.index.get(title).copied()
    }

    pub fn title(&self, id: ItemId) -> &str {
        &self.titles[id.0 as usize]
    }

    pub fn item(&self, id: ItemId) -> ItemRef {
        ItemRef {
            id,
            title: self.titles[id.0 as usize].clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.titles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.titles.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ItemId> + '_ {
        (0..self.titles.len() as u32).map(ItemId)
    }

    /// Rebuild the lookup index after deserialization (serde skips it).
    pub fn rebuild_index(&mut self) {
        self.index = self
            .titles
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), ItemId(i as u32)))
            .collect();
    }
}

/// Intern a list of titles, returning per-row ids and the catalog.
pub fn intern_catalog(titles: &[String]) -> Result<(Vec<ItemId>, ItemCatalog), DomainError> {
    if titles.is_empty() {
        return Err(DomainError::EmptyCatalog);
    }
    let mut catalog = ItemCatalog::new();
    let mut ids = Vec::with_capacity(titles.len());
    for (row, title) in titles.iter().enumerate() {
        ids.push(catalog.intern(title, row)?);
    }
    Ok((ids, catalog))
}

pub const MIN_INTERACTIONS: usize = 5;

/// One user instance: chronological history (oldest first) plus the held-out
/// final interaction used as ground truth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserRecord {
    pub user_id: UserId,
    pub history: Vec<ItemRef>,
    pub holdout_item: ItemRef,
}

impl UserRecord {
    pub fn new(
        user_id: UserId,
        history: Vec<ItemRef>,
        holdout_item: ItemRef,
    ) -> Result<Self, DomainError> {
        if history.len() < MIN_INTERACTIONS - 1 {
            return Err(DomainError::HistoryTooShort {
                user: user_id.0,
                len: history.len(),
                min: MIN_INTERACTIONS - 1,
            });
        }
        debug_assert!(history.iter().all(|i| i.id != holdout_item.id));
        Ok(Self {
            user_id,
            history,
            holdout_item,
        })
    }
}

/// A candidate slate: exactly `m` items, one of which is the ground truth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub items: Vec<ItemRef>,
    pub ground_truth_pos: usize,
}

impl CandidateSet {
    pub fn new(items: Vec<ItemRef>, ground_truth_pos: usize, m: usize) -> Result<Self, DomainError> {
        if items.len() != m {
            return Err(DomainError::CandidateCount {
                got: items.len(),
                want: m,
            });
        }
        if ground_truth_pos >= items.len() {
            return Err(DomainError::GroundTruthOutOfRange {
                pos: ground_truth_pos,
                len: items.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for it in &items {
            if !seen.insert(it.id) {
                return Err(DomainError::DuplicateCandidate(it.id.0));
            }
        }
        Ok(Self {
            items,
            ground_truth_pos,
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn ground_truth(&self) -> &ItemRef {
        &self.items[self.ground_truth_pos]
    }
}

/// The four prompt patterns, in their fixed concatenation order.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub enum PatternKind {
    RolePlaying,
    HistoryRecords,
    ReasoningGuidance,
    OutputFormat,
}

impl PatternKind {
    pub const ALL: [PatternKind; 4] = [
        PatternKind::RolePlaying,
        PatternKind::HistoryRecords,
        PatternKind::ReasoningGuidance,
        PatternKind::OutputFormat,
    ];

    /// Zero-based position in the concatenation order.
    pub fn index(self) -> usize {
        match self {
            PatternKind::RolePlaying => 0,
            PatternKind::HistoryRecords => 1,
            PatternKind::ReasoningGuidance => 2,
            PatternKind::OutputFormat => 3,
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PatternKind::RolePlaying => "role-playing",
            PatternKind::HistoryRecords => "history-records",
            PatternKind::ReasoningGuidance => "reasoning-guidance",
            PatternKind::OutputFormat => "output-format",
        };
        f.write_str(s)
    }
}

/// One action index per pattern; the tuple that determines a prompt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JointAction([usize; 4]);

impl JointAction {
    pub fn new(role: usize, history: usize, reasoning: usize, output: usize) -> Self {
        Self([role, history, reasoning, output])
    }

    pub fn get(&self, pattern: PatternKind) -> usize {
        self.0[pattern.index()]
    }

    pub fn set(&mut self, pattern: PatternKind, index: usize) {
        self.0[pattern.index()] = index;
    }

    /// Build from a possibly-partial map, rejecting missing patterns.
    pub fn from_map(map: &HashMap<PatternKind, usize>) -> Result<Self, DomainError> {
        let mut out = [0usize; 4];
        for pattern in PatternKind::ALL {
            match map.get(&pattern) {
                Some(&ix) => out[pattern.index()] = ix,
                None => return Err(DomainError::MissingPattern(pattern)),
            }
        }
        Ok(Self(out))
    }

    pub fn as_array(&self) -> [usize; 4] {
        self.0
    }
}

/// Check every index against its pattern's action-set size.
pub fn validate_joint_action(
    action: &JointAction,
    catalog_sizes: &HashMap<PatternKind, usize>,
) -> Result<(), DomainError> {
    for pattern in PatternKind::ALL {
        let size = *catalog_sizes
            .get(&pattern)
            .ok_or(DomainError::MissingPattern(pattern))?;
        let index = action.get(pattern);
        if index >= size {
            return Err(DomainError::ActionOutOfRange {
                pattern,
                index,
                size,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn titles(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn intern_dedups_by_equality() {
        let (ids, catalog) = intern_catalog(&titles(&["A", "B", "A"])).unwrap();
        assert_eq!(ids, vec![ItemId(0), ItemId(1), ItemId(0)]);
        assert_eq!(catalog.len(), 2);
    }

    #[test]
    fn intern_rejects_empty_catalog() {
        assert_eq!(intern_catalog(&[]).unwrap_err(), DomainError::EmptyCatalog);
    }

    #[test]
    fn intern_preserves_title_bytes() {
        let (ids, catalog) = intern_catalog(&titles(&["The Fly"])).unwrap();
        assert_eq!(ids, vec![ItemId(0)]);
        assert_eq!(catalog.title(ItemId(0)), "The Fly");
    }

    #[test]
    fn intern_rejects_bad_titles() {
        let err = intern_catalog(&titles(&["ok", ""])).unwrap_err();
        assert_eq!(err, DomainError::EmptyTitle { row: 1 });
        let err = intern_catalog(&titles(&["a\nb"])).unwrap_err();
        assert!(matches!(err, DomainError::TitleLineBreak { row: 0, .. }));
    }

    #[test]
    fn intern_round_trip_identity() {
        let raw = titles(&["Alien", "The Fly", "Brazil", "Alien"]);
        let (ids, catalog) = intern_catalog(&raw).unwrap();
        for (title, id) in raw.iter().zip(&ids) {
            assert_eq!(catalog.title(*id), title);
            assert_eq!(catalog.lookup(title), Some(*id));
        }
    }

    fn sizes(role: usize, hist: usize, reason: usize, out: usize) -> HashMap<PatternKind, usize> {
        HashMap::from([
            (PatternKind::RolePlaying, role),
            (PatternKind::HistoryRecords, hist),
            (PatternKind::ReasoningGuidance, reason),
            (PatternKind::OutputFormat, out),
        ])
    }

    #[test]
    fn joint_action_in_range_ok() {
        let a = JointAction::new(0, 3, 8, 4);
        assert!(validate_joint_action(&a, &sizes(3, 8, 9, 5)).is_ok());
    }

    #[test]
    fn joint_action_boundary_rejected() {
        let a = JointAction::new(0, 0, 9, 0);
        let err = validate_joint_action(&a, &sizes(3, 8, 9, 5)).unwrap_err();
        assert_eq!(
            err,
            DomainError::ActionOutOfRange {
                pattern: PatternKind::ReasoningGuidance,
                index: 9,
                size: 9,
            }
        );
    }

    #[test]
    fn joint_action_missing_pattern_rejected() {
        let map = HashMap::from([
            (PatternKind::RolePlaying, 0),
            (PatternKind::HistoryRecords, 1),
            (PatternKind::ReasoningGuidance, 2),
        ]);
        let err = JointAction::from_map(&map).unwrap_err();
        assert_eq!(err, DomainError::MissingPattern(PatternKind::OutputFormat));
    }

    #[test]
    fn joint_action_serde_round_trip() {
        let a = JointAction::new(2, 1, 7, 4);
        let json = serde_json::to_string(&a).unwrap();
        let back: JointAction = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
    }
}
