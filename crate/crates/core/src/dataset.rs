//! Interaction parsing, id interning, and the bidirectional adjacency
//! structure the rest of the crate reads.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};

/// One user/item event as read from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionRecord {
    pub user: String,
    pub item: String,
    pub rating: f64,
    pub timestamp: Option<i64>,
}

/// Role of a column in a delimited interaction file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    User,
    Item,
    Rating,
    Timestamp,
    Skip,
}

/// Delimiter plus column layout for a delimited interaction file.
#[derive(Debug, Clone)]
pub struct InputFormat {
    pub delimiter: char,
    pub columns: Vec<ColumnRole>,
    pub skip_header: bool,
}

impl InputFormat {
    /// Parse a descriptor like `tab:user,item,rating,timestamp`.
    ///
    /// The delimiter is `tab` or `comma`; columns are any arrangement of
    /// `user`, `item`, `rating`, `timestamp` and `skip`, with user and item
    /// required exactly once. Files without a rating column get an implicit
    /// rating of 1.0 per event.
    pub fn parse(descriptor: &str) -> Result<InputFormat> {
        let (delim, cols) = descriptor.split_once(':').ok_or_else(|| {
            Error::InvalidFormat(format!("`{descriptor}` (expected `<delimiter>:<columns>`)"))
        })?;
        let delimiter = match delim.trim() {
            "tab" | "tsv" => '\t',
            "comma" | "csv" => ',',
            other => return Err(Error::InvalidFormat(format!("unknown delimiter `{other}`"))),
        };
        let mut columns = Vec::new();
        for name in cols.split(',') {
            columns.push(match name.trim() {
                "user" => ColumnRole::User,
                "item" => ColumnRole::Item,
                "rating" => ColumnRole::Rating,
                "timestamp" | "time" => ColumnRole::Timestamp,
                "skip" | "-" => ColumnRole::Skip,
                other => return Err(Error::InvalidFormat(format!("unknown column `{other}`"))),
            });
        }
        for (role, label) in [(ColumnRole::User, "user"), (ColumnRole::Item, "item")] {
            let n = columns.iter().filter(|&&c| c == role).count();
            if n != 1 {
                return Err(Error::InvalidFormat(format!(
                    "need exactly one `{label}` column, found {n}"
                )));
            }
        }
        for (role, label) in [
            (ColumnRole::Rating, "rating"),
            (ColumnRole::Timestamp, "timestamp"),
        ] {
            if columns.iter().filter(|&&c| c == role).count() > 1 {
                return Err(Error::InvalidFormat(format!("more than one `{label}` column")));
            }
        }
        Ok(InputFormat {
            delimiter,
            columns,
            skip_header: false,
        })
    }

    pub fn with_header(mut self, skip: bool) -> InputFormat {
        self.skip_header = skip;
        self
    }
}

/// A line the parser had to skip, with its 1-based line number.
#[derive(Debug, Clone, PartialEq)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

/// Parsed records plus the lines that failed to parse.
#[derive(Debug)]
pub struct ParseOutcome {
    pub records: Vec<InteractionRecord>,
    pub line_errors: Vec<LineError>,
}

/// Read delimited interactions, skipping (and reporting) malformed lines.
///
/// Blank lines are ignored. Fails only when the stream itself errors or
/// yields no usable record at all.
pub fn parse_interactions<R: BufRead>(reader: R, format: &InputFormat) -> Result<ParseOutcome> {
    let mut records = Vec::new();
    let mut line_errors = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if idx == 0 && format.skip_header {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(&line, format) {
            Ok(record) => records.push(record),
            Err(message) => line_errors.push(LineError {
                line: idx + 1,
                message,
            }),
        }
    }
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(ParseOutcome {
        records,
        line_errors,
    })
}

fn parse_line(line: &str, format: &InputFormat) -> std::result::Result<InteractionRecord, String> {
    let fields: Vec<&str> = line.split(format.delimiter).collect();
    if fields.len() != format.columns.len() {
        return Err(format!(
            "expected {} fields, got {}",
            format.columns.len(),
            fields.len()
        ));
    }
    let mut user = None;
    let mut item = None;
    let mut rating = None;
    let mut timestamp = None;
    for (&role, field) in format.columns.iter().zip(&fields) {
        let field = field.trim();
        match role {
            ColumnRole::User => {
                if field.is_empty() {
                    return Err("empty user field".into());
                }
                user = Some(field.to_string());
            }
            ColumnRole::Item => {
                if field.is_empty() {
                    return Err("empty item field".into());
                }
                item = Some(field.to_string());
            }
            ColumnRole::Rating => {
                let value: f64 = field.parse().map_err(|_| format!("bad rating `{field}`"))?;
                if !value.is_finite() || value < 0.0 {
                    return Err(format!("bad rating `{field}`"));
                }
                rating = Some(value);
            }
            ColumnRole::Timestamp => {
                let value: i64 = field
                    .parse()
                    .map_err(|_| format!("bad timestamp `{field}`"))?;
                timestamp = Some(value);
            }
            ColumnRole::Skip => {}
        }
    }
    Ok(InteractionRecord {
        user: user.unwrap(),
        item: item.unwrap(),
        rating: rating.unwrap_or(1.0),
        timestamp,
    })
}

/// Token <-> dense index map. Indices follow first appearance, so identical
/// inputs always produce identical maps.
#[derive(Debug, Clone, Default)]
pub struct IdMap {
    index_of: HashMap<String, u32>,
    tokens: Vec<String>,
}

impl IdMap {
    fn intern(&mut self, token: &str) -> u32 {
        if let Some(&idx) = self.index_of.get(token) {
            return idx;
        }
        let idx = self.tokens.len() as u32;
        self.index_of.insert(token.to_string(), idx);
        self.tokens.push(token.to_string());
        idx
    }

    pub fn index(&self, token: &str) -> Option<u32> {
        self.index_of.get(token).copied()
    }

    pub fn token(&self, index: u32) -> &str {
        &self.tokens[index as usize]
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Which side of the interaction matrix an operation works over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Rows are items, row members are the users who engaged them.
    Item,
    /// Rows are users, row members are the items in their profile.
    User,
}

impl Axis {
    pub fn label(self) -> &'static str {
        match self {
            Axis::Item => "item",
            Axis::User => "user",
        }
    }
}

/// Deduplicated interactions held in both orientations.
///
/// `items_of` rows are sorted by item index and `users_of` rows by user
/// index; the counting and scoring code depends on that ordering.
#[derive(Debug, Clone)]
pub struct Dataset {
    users: IdMap,
    items: IdMap,
    user_to_items: Vec<Vec<(u32, f64, Option<i64>)>>,
    item_to_users: Vec<Vec<(u32, f64)>>,
    n_transactions: usize,
}

impl Dataset {
    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn n_transactions(&self) -> usize {
        self.n_transactions
    }

    pub fn user_map(&self) -> &IdMap {
        &self.users
    }

    pub fn item_map(&self) -> &IdMap {
        &self.items
    }

    /// (item, rating, timestamp) triples for one user, ascending by item.
    pub fn items_of(&self, user: usize) -> &[(u32, f64, Option<i64>)] {
        &self.user_to_items[user]
    }

    /// (user, rating) pairs for one item, ascending by user.
    pub fn users_of(&self, item: usize) -> &[(u32, f64)] {
        &self.item_to_users[item]
    }

    pub fn n_entities(&self, axis: Axis) -> usize {
        match axis {
            Axis::Item => self.n_items(),
            Axis::User => self.n_users(),
        }
    }

    /// Profile size of one entity on the given axis.
    pub fn row_len(&self, axis: Axis, index: usize) -> usize {
        match axis {
            Axis::Item => self.item_to_users[index].len(),
            Axis::User => self.user_to_items[index].len(),
        }
    }

    pub(crate) fn check_index(&self, axis: Axis, index: usize) -> Result<()> {
        let len = self.n_entities(axis);
        if index >= len {
            return Err(Error::IndexOutOfRange {
                axis: axis.label(),
                index,
                len,
            });
        }
        Ok(())
    }

    pub(crate) fn from_edges(
        users: IdMap,
        items: IdMap,
        edges: Vec<(u32, u32, f64, Option<i64>)>,
    ) -> Dataset {
        let mut user_to_items = vec![Vec::new(); users.len()];
        let mut item_to_users = vec![Vec::new(); items.len()];
        let n_transactions = edges.len();
        for (u, i, r, ts) in edges {
            user_to_items[u as usize].push((i, r, ts));
            item_to_users[i as usize].push((u, r));
        }
        for row in &mut user_to_items {
            row.sort_unstable_by_key(|e| e.0);
        }
        for row in &mut item_to_users {
            row.sort_unstable_by_key(|e| e.0);
        }
        Dataset {
            users,
            items,
            user_to_items,
            item_to_users,
            n_transactions,
        }
    }
}

/// Build the adjacency structure from parsed records.
///
/// Repeat (user, item) events collapse to the one with the greatest
/// timestamp; ties, and events without timestamps, resolve to the latest
/// occurrence in input order. With `min_user_interactions` > 0, users left
/// with fewer distinct items are dropped and indices are compacted; items
/// that lose all their users disappear as well.
pub fn build_dataset(
    records: &[InteractionRecord],
    min_user_interactions: usize,
) -> Result<Dataset> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut users = IdMap::default();
    let mut items = IdMap::default();
    let mut dedup: HashMap<(u32, u32), (f64, Option<i64>)> = HashMap::new();
    for record in records {
        let u = users.intern(&record.user);
        let i = items.intern(&record.item);
        match dedup.entry((u, i)) {
            Entry::Occupied(mut slot) => {
                if record.timestamp >= slot.get().1 {
                    slot.insert((record.rating, record.timestamp));
                }
            }
            Entry::Vacant(slot) => {
                slot.insert((record.rating, record.timestamp));
            }
        }
    }
    let mut edges: Vec<(u32, u32, f64, Option<i64>)> = dedup
        .into_iter()
        .map(|((u, i), (r, ts))| (u, i, r, ts))
        .collect();
    edges.sort_unstable_by_key(|&(u, i, _, _)| (u, i));

    if min_user_interactions > 1 {
        let mut degree = vec![0usize; users.len()];
        for &(u, _, _, _) in &edges {
            degree[u as usize] += 1;
        }
        if degree.iter().any(|&d| d < min_user_interactions) {
            edges.retain(|&(u, _, _, _)| degree[u as usize] >= min_user_interactions);
            if edges.is_empty() {
                return Err(Error::EmptyInput);
            }
            let mut item_alive = vec![false; items.len()];
            for &(_, i, _, _) in &edges {
                item_alive[i as usize] = true;
            }
            let (new_users, user_remap) =
                compact_map(&users, |u| degree[u] >= min_user_interactions);
            let (new_items, item_remap) = compact_map(&items, |i| item_alive[i]);
            for edge in &mut edges {
                edge.0 = user_remap[edge.0 as usize].unwrap();
                edge.1 = item_remap[edge.1 as usize].unwrap();
            }
            users = new_users;
            items = new_items;
        }
    }

    Ok(Dataset::from_edges(users, items, edges))
}

fn compact_map(map: &IdMap, keep: impl Fn(usize) -> bool) -> (IdMap, Vec<Option<u32>>) {
    let mut out = IdMap::default();
    let mut remap = vec![None; map.len()];
    for (old, slot) in remap.iter_mut().enumerate() {
        if keep(old) {
            *slot = Some(out.intern(map.token(old as u32)));
        }
    }
    (out, remap)
}

/// Headline dataset numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DatasetStats {
    pub users: usize,
    pub items: usize,
    pub transactions: usize,
    /// Fraction of the user x item matrix without an interaction.
    pub sparsity: f64,
}

pub fn dataset_stats(d: &Dataset) -> DatasetStats {
    let users = d.n_users();
    let items = d.n_items();
    let transactions = d.n_transactions();
    let cells = users as f64 * items as f64;
    let sparsity = if cells == 0.0 {
        0.0
    } else {
        1.0 - transactions as f64 / cells
    };
    DatasetStats {
        users,
        items,
        transactions,
        sparsity,
    }
}

impl DatasetStats {
    /// Sparsity as a percentage with two decimals, e.g. `99.76%`.
    pub fn sparsity_percent(&self) -> String {
        format!("{:.2}%", self.sparsity * 100.0)
    }

    /// Aligned two-column text table.
    pub fn render_table(&self) -> String {
        let rows = [
            ("users", self.users.to_string()),
            ("items", self.items.to_string()),
            ("transactions", self.transactions.to_string()),
            ("sparsity", self.sparsity_percent()),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap();
        let mut out = String::new();
        for (k, v) in rows {
            out.push_str(&format!("{k:<width$}  {v}\n"));
        }
        out
    }
}
