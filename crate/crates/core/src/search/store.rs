//! On-disk results: `<dir>/l_1_2.csv` with one row per record, and
//! `<dir>/l_1_2.json` with the full records. Both are rewritten whole,
//! sorted by `(n, window)`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::SearchRecord;
use crate::dilates::DilateTuple;
use crate::error::Result;

/// Window size as a function of the set size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowPolicy {
    /// `W = factor * n`.
    Multiple(u64),
    /// The same `W` for every `n`.
    Fixed(u64),
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy::Multiple(3)
    }
}

impl WindowPolicy {
    pub fn window(&self, n: usize) -> u64 {
        match *self {
            WindowPolicy::Multiple(f) => f * n as u64,
            WindowPolicy::Fixed(w) => w,
        }
    }
}

#[derive(Serialize)]
struct Row<'a> {
    lambda: String,
    k: usize,
    n: usize,
    window: u64,
    min_size: usize,
    empirical_constant: i128,
    exhaustive: bool,
    witness_count: u64,
    example_witness: &'a str,
}

#[derive(Clone, Debug)]
pub struct ResultsStore {
    dir: PathBuf,
}

impl ResultsStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ResultsStore { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn csv_path(&self, lambdas: &DilateTuple) -> PathBuf {
        self.dir.join(format!("{}.csv", lambdas.canonical_name()))
    }

    pub fn json_path(&self, lambdas: &DilateTuple) -> PathBuf {
        self.dir.join(format!("{}.json", lambdas.canonical_name()))
    }

    /// Records stored for `lambdas`; empty when nothing was saved yet.
    pub fn load(&self, lambdas: &DilateTuple) -> Result<Vec<SearchRecord>> {
        let path = self.json_path(lambdas);
        if !path.exists() {
            return Ok(Vec::new());
        }
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, lambdas: &DilateTuple, records: &[SearchRecord]) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut records = records.to_vec();
        records.sort_by_key(|r| (r.n, r.window));
        records.dedup_by_key(|r| (r.n, r.window));

        let mut json = serde_json::to_string_pretty(&records)?;
        json.push('\n');
        fs::write(self.json_path(lambdas), json)?;

        let mut w = csv::Writer::from_path(self.csv_path(lambdas))?;
        for r in &records {
            let example = r.witnesses.first().map(ToString::to_string).unwrap_or_default();
            w.serialize(Row {
                lambda: r.lambdas.to_string(),
                k: r.k,
                n: r.n,
                window: r.window,
                min_size: r.min_size,
                empirical_constant: r.empirical_constant,
                exhaustive: r.exhaustive,
                witness_count: r.witness_count,
                example_witness: &example,
            })?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{constant_table, SearchConfig};

    fn tuple(v: &[i64]) -> DilateTuple {
        DilateTuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn table_examples() {
        let dir = tempfile::tempdir().unwrap();
        let store = ResultsStore::new(dir.path());
        let cfg = SearchConfig::default();
        let t = constant_table(&tuple(&[1, 2]), 2, 4, WindowPolicy::default(), &store, &cfg, |_, _| {}).unwrap();
        let mins: Vec<usize> = t.iter().map(|r| r.min_size).collect();
        let cs: Vec<i128> = t.iter().map(|r| r.empirical_constant).collect();
        assert_eq!(mins, vec![4, 7, 10]);
        assert_eq!(cs, vec![2, 2, 2]);

        let t = constant_table(&tuple(&[1, 1]), 2, 4, WindowPolicy::default(), &store, &cfg, |_, _| {}).unwrap();
        assert!(t.iter().all(|r| r.empirical_constant == 1));

        let t = constant_table(&tuple(&[2, 3]), 2, 3, WindowPolicy::default(), &store, &cfg, |_, _| {}).unwrap();
        assert_eq!(t[0].min_size, 4);
        assert_eq!(t[1].min_size, 8);
    }

    #[test]
    fn cache_is_reused_and_files_are_stable() {
        let dir = tempfile::tempdir().unwrap();
        let store = ResultsStore::new(dir.path());
        let cfg = SearchConfig::default();
        let l = tuple(&[2, 1]);
        let mut fresh = 0;
        constant_table(&l, 2, 3, WindowPolicy::default(), &store, &cfg, |_, cached| fresh += usize::from(!cached))
            .unwrap();
        assert_eq!(fresh, 2);
        let csv1 = fs::read_to_string(store.csv_path(&l)).unwrap();
        let json1 = fs::read_to_string(store.json_path(&l)).unwrap();
        assert!(store.csv_path(&l).ends_with("l_1_2.csv"));
        assert!(csv1.starts_with(
            "lambda,k,n,window,min_size,empirical_constant,exhaustive,witness_count,example_witness\n"
        ));

        let mut hits = 0;
        constant_table(&l, 2, 3, WindowPolicy::default(), &store, &cfg, |_, cached| hits += usize::from(cached))
            .unwrap();
        assert_eq!(hits, 2);

        // a fresh directory reproduces the files byte for byte
        let dir2 = tempfile::tempdir().unwrap();
        let store2 = ResultsStore::new(dir2.path());
        constant_table(&l, 2, 3, WindowPolicy::default(), &store2, &cfg, |_, _| {}).unwrap();
        assert_eq!(fs::read_to_string(store2.csv_path(&l)).unwrap(), csv1);
        assert_eq!(fs::read_to_string(store2.json_path(&l)).unwrap(), json1);
    }
}
