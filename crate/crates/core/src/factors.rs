//! Assembly of the per-word factor table: three semantic factors, one
//! distributional, three phonological. Missing per-word values are filled by
//! mean imputation with flags; a factor whose raw coverage falls below the
//! configured floor is dropped for the whole run instead of imputed.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use crate::corpus::ContextTable;
use crate::distribution::contextual_diversity;
use crate::error::{Error, Result};
use crate::phonology::{
    phonological_complexity, phonological_density, phonological_typicality, PhonemeLm,
    Transcription,
};
use crate::semantics::{
    impute_mean, num_meanings, predict_concreteness, semantic_density, BetaRegModel,
    EmbeddingSpace, MeaningsDB,
};
use crate::stats::minmax_scale;

pub const FACTOR_COUNT: usize = 7;
pub const FACTOR_NAMES: [&str; FACTOR_COUNT] = [
    "semdens", "conc", "nmngs", "cdiv", "phontyp", "phondens", "phoncomp",
];

/// Factor values for one word; `None` where the factor is unavailable for
/// the run, with imputation flags for values filled by the column mean.
#[derive(Debug, Clone, Default)]
pub struct FactorVector {
    pub values: [Option<f64>; FACTOR_COUNT],
    pub imputed: [bool; FACTOR_COUNT],
}

/// The assembled table plus per-factor availability and raw coverage.
#[derive(Debug, Clone)]
pub struct FactorTable {
    pub words: Vec<String>,
    pub rows: BTreeMap<String, FactorVector>,
    pub available: [bool; FACTOR_COUNT],
    /// Fraction of words with a directly computed value, before imputation.
    pub coverage: [f64; FACTOR_COUNT],
    pub warnings: Vec<String>,
}

/// Resources feeding the factor estimators; any subset may be present and
/// absent resources simply mark their factors unavailable.
pub struct FactorInputs<'a> {
    pub embedding_space: Option<&'a EmbeddingSpace>,
    pub concreteness_model: Option<&'a BetaRegModel>,
    pub meanings: Option<&'a MeaningsDB>,
    pub meanings_window: (i32, i32),
    pub context_table: Option<&'a ContextTable>,
    pub pronunciations: Option<&'a BTreeMap<String, Transcription>>,
    pub phoneme_lm: Option<&'a dyn PhonemeLm>,
    pub density_lexicon: Option<&'a [Transcription]>,
    pub knn_k: usize,
    pub coverage_floor: f64,
}

impl<'a> Default for FactorInputs<'a> {
    fn default() -> Self {
        FactorInputs {
            embedding_space: None,
            concreteness_model: None,
            meanings: None,
            meanings_window: (1800, 1810),
            context_table: None,
            pronunciations: None,
            phoneme_lm: None,
            density_lexicon: None,
            knn_k: 10,
            coverage_floor: 0.2,
        }
    }
}

/// Compute every factor whose resources are present for the given words.
pub fn compute_factors(words: &[String], inputs: &FactorInputs) -> Result<FactorTable> {
    if words.is_empty() {
        return Err(Error::InsufficientData {
            msg: "no words to compute factors for".into(),
        });
    }
    let mut warnings: Vec<String> = Vec::new();

    // raw per-factor columns, None = not computable for that word
    let mut raw: [Option<Vec<Option<f64>>>; FACTOR_COUNT] = Default::default();

    if let Some(space) = inputs.embedding_space {
        let col: Vec<Option<f64>> = words
            .par_iter()
            .map(|w| semantic_density(w, space, inputs.knn_k).ok())
            .collect();
        raw[0] = Some(col);
    }
    if let (Some(space), Some(model)) = (inputs.embedding_space, inputs.concreteness_model) {
        let col: Vec<Option<f64>> = words
            .par_iter()
            .map(|w| predict_concreteness(w, space, model).ok())
            .collect();
        raw[1] = Some(col);
    }
    if let Some(db) = inputs.meanings {
        let col: Vec<Option<f64>> = words
            .iter()
            .map(|w| {
                num_meanings(w, db, inputs.meanings_window)
                    .map(|n| n.map(|c| c as f64))
            })
            .collect::<Result<_>>()?;
        raw[2] = Some(col);
    }
    if let Some(table) = inputs.context_table {
        let col: Vec<Option<f64>> = words
            .par_iter()
            .map(|w| contextual_diversity(w, table).ok())
            .collect();
        raw[3] = Some(col);
    }
    if let (Some(lex), Some(lm)) = (inputs.pronunciations, inputs.phoneme_lm) {
        let mut col = Vec::with_capacity(words.len());
        for w in words {
            match lex.get(w) {
                Some(t) => col.push(Some(phonological_typicality(t, lm)?)),
                None => col.push(None),
            }
        }
        raw[4] = Some(col);
    }
    if let (Some(lex), Some(all)) = (inputs.pronunciations, inputs.density_lexicon) {
        let col: Vec<Option<f64>> = words
            .iter()
            .map(|w| lex.get(w).map(|t| phonological_density(t, all)))
            .collect();
        raw[5] = Some(col);
    }
    if let Some(lex) = inputs.pronunciations {
        let col: Vec<Option<f64>> = words
            .iter()
            .map(|w| {
                lex.get(w).map(|t| {
                    let c = phonological_complexity(t);
                    if c == 0.0 {
                        warnings.push(format!("'{w}' has no syllabic nucleus"));
                    }
                    c
                })
            })
            .collect();
        raw[6] = Some(col);
    }

    let mut available = [false; FACTOR_COUNT];
    let mut coverage = [0.0; FACTOR_COUNT];
    let mut rows: BTreeMap<String, FactorVector> = words
        .iter()
        .map(|w| (w.clone(), FactorVector::default()))
        .collect();

    for f in 0..FACTOR_COUNT {
        let Some(col) = &raw[f] else { continue };
        let present = col.iter().filter(|v| v.is_some()).count();
        coverage[f] = present as f64 / words.len() as f64;
        if present == 0 || coverage[f] < inputs.coverage_floor {
            warnings.push(format!(
                "factor {} dropped: coverage {:.1}% below floor {:.1}%",
                FACTOR_NAMES[f],
                100.0 * coverage[f],
                100.0 * inputs.coverage_floor
            ));
            continue;
        }
        available[f] = true;
        let map: BTreeMap<String, Option<f64>> = words
            .iter()
            .cloned()
            .zip(col.iter().copied())
            .collect();
        let filled = impute_mean(&map)?;
        for (w, (v, was_imputed)) in filled {
            let row = rows.get_mut(&w).expect("word present");
            row.values[f] = Some(v);
            row.imputed[f] = was_imputed;
        }
    }

    Ok(FactorTable {
        words: words.to_vec(),
        rows,
        available,
        coverage,
        warnings,
    })
}

impl FactorTable {
    /// Indices of factors available in this run.
    pub fn available_indices(&self) -> Vec<usize> {
        (0..FACTOR_COUNT).filter(|&f| self.available[f]).collect()
    }

    /// Min-max scale each available factor over all words and return per-word
    /// vectors (in available-factor order) plus the kept factor names.
    /// Constant factors are dropped with a warning rather than scaled.
    pub fn scaled_map(&self) -> Result<(BTreeMap<String, Vec<f64>>, Vec<String>, Vec<String>)> {
        let mut kept_names = Vec::new();
        let mut dropped = Vec::new();
        let mut columns: Vec<Vec<f64>> = Vec::new();
        for f in self.available_indices() {
            let col: Vec<f64> = self
                .words
                .iter()
                .map(|w| self.rows[w].values[f].expect("available factor"))
                .collect();
            match minmax_scale(&col, FACTOR_NAMES[f]) {
                Ok(scaled) => {
                    kept_names.push(FACTOR_NAMES[f].to_string());
                    columns.push(scaled);
                }
                Err(Error::ConstantFeature { name }) => {
                    dropped.push(format!("factor {name} constant across words, dropped"));
                }
                Err(e) => return Err(e),
            }
        }
        if kept_names.is_empty() {
            return Err(Error::NoData);
        }
        let mut map = BTreeMap::new();
        for (i, w) in self.words.iter().enumerate() {
            let v: Vec<f64> = columns.iter().map(|c| c[i]).collect();
            map.insert(w.clone(), v);
        }
        Ok((map, kept_names, dropped))
    }

    /// Raw (unscaled) column of one factor, words in table order.
    pub fn column(&self, f: usize) -> Option<Vec<f64>> {
        if !self.available[f] {
            return None;
        }
        Some(
            self.words
                .iter()
                .map(|w| self.rows[w].values[f].expect("available factor"))
                .collect(),
        )
    }

    /// Serialize as TSV: word, seven value columns (NA when unavailable),
    /// seven 0/1 imputation flags.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str("# word");
        for n in FACTOR_NAMES {
            out.push_str(&format!("\t{n}"));
        }
        for n in FACTOR_NAMES {
            out.push_str(&format!("\t{n}_imputed"));
        }
        out.push('\n');
        for w in &self.words {
            let row = &self.rows[w];
            out.push_str(w);
            for f in 0..FACTOR_COUNT {
                match row.values[f] {
                    Some(v) => out.push_str(&format!("\t{v:.9e}")),
                    None => out.push_str("\tNA"),
                }
            }
            for f in 0..FACTOR_COUNT {
                out.push_str(if row.imputed[f] { "\t1" } else { "\t0" });
            }
            out.push('\n');
        }
        out
    }

    /// Parse a table written by [`FactorTable::to_tsv`].
    pub fn from_tsv(path: &Path) -> Result<FactorTable> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut words = Vec::new();
        let mut rows = BTreeMap::new();
        let mut seen_any = [false; FACTOR_COUNT];
        for (lineno, line) in content.lines().enumerate() {
            let lineno = lineno + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 1 + 2 * FACTOR_COUNT {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("expected {} columns, got {}", 1 + 2 * FACTOR_COUNT, fields.len()),
                ));
            }
            let word = fields[0].to_string();
            let mut fv = FactorVector::default();
            for f in 0..FACTOR_COUNT {
                let cell = fields[1 + f];
                if cell != "NA" {
                    let v: f64 = cell.parse().map_err(|_| {
                        Error::parse(path, lineno, format!("bad value '{cell}'"))
                    })?;
                    fv.values[f] = Some(v);
                    seen_any[f] = true;
                }
                fv.imputed[f] = fields[1 + FACTOR_COUNT + f] == "1";
            }
            if rows.insert(word.clone(), fv).is_some() {
                return Err(Error::Duplicate {
                    path: path.into(),
                    line: lineno,
                    key: word,
                });
            }
            words.push(word);
        }
        if words.is_empty() {
            return Err(Error::NoData);
        }
        let n = words.len() as f64;
        let mut coverage = [0.0; FACTOR_COUNT];
        for f in 0..FACTOR_COUNT {
            if seen_any[f] {
                let imputed = rows.values().filter(|r| r.imputed[f]).count();
                coverage[f] = 1.0 - imputed as f64 / n;
            }
        }
        Ok(FactorTable {
            words,
            rows,
            available: seen_any,
            coverage,
            warnings: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_with(values: Vec<(&str, [Option<f64>; FACTOR_COUNT])>) -> FactorTable {
        let words: Vec<String> = values.iter().map(|(w, _)| w.to_string()).collect();
        let rows: BTreeMap<String, FactorVector> = values
            .into_iter()
            .map(|(w, vals)| {
                (
                    w.to_string(),
                    FactorVector {
                        values: vals,
                        imputed: [false; FACTOR_COUNT],
                    },
                )
            })
            .collect();
        let mut available = [false; FACTOR_COUNT];
        for f in 0..FACTOR_COUNT {
            available[f] = rows.values().all(|r| r.values[f].is_some());
        }
        FactorTable {
            words,
            rows,
            available,
            coverage: [1.0; FACTOR_COUNT],
            warnings: Vec::new(),
        }
    }

    #[test]
    fn tsv_roundtrip() {
        let mut vals_a = [None; FACTOR_COUNT];
        vals_a[0] = Some(0.5);
        vals_a[3] = Some(0.25);
        let mut vals_b = [None; FACTOR_COUNT];
        vals_b[0] = Some(0.75);
        vals_b[3] = Some(0.125);
        let t = table_with(vec![("alpha", vals_a), ("beta", vals_b)]);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("factors.tsv");
        std::fs::write(&p, t.to_tsv()).unwrap();
        let back = FactorTable::from_tsv(&p).unwrap();
        assert_eq!(back.words, t.words);
        assert_eq!(back.available[0], true);
        assert_eq!(back.available[1], false);
        assert_eq!(back.rows["alpha"].values[3], Some(0.25));
    }

    #[test]
    fn scaled_map_drops_constant_factor() {
        let mut va = [None; FACTOR_COUNT];
        va[0] = Some(0.2);
        va[3] = Some(0.7);
        let mut vb = [None; FACTOR_COUNT];
        vb[0] = Some(0.8);
        vb[3] = Some(0.7); // cdiv constant
        let t = table_with(vec![("a", va), ("b", vb)]);
        let (map, names, dropped) = t.scaled_map().unwrap();
        assert_eq!(names, vec!["semdens".to_string()]);
        assert_eq!(dropped.len(), 1);
        assert_eq!(map["a"], vec![0.0]);
        assert_eq!(map["b"], vec![1.0]);
    }

    #[test]
    fn coverage_floor_drops_factor() {
        use crate::semantics::EmbeddingSpace;
        // only 1 of 5 words embedded -> 20% coverage < 50% floor
        let space = EmbeddingSpace::from_vectors(vec![
            ("known".to_string(), vec![1.0, 0.0]),
            ("n1".to_string(), vec![0.9, 0.1]),
            ("n2".to_string(), vec![0.8, 0.2]),
        ])
        .unwrap();
        let words: Vec<String> = vec![
            "known".into(),
            "m1".into(),
            "m2".into(),
            "m3".into(),
            "m4".into(),
        ];
        let inputs = FactorInputs {
            embedding_space: Some(&space),
            knn_k: 2,
            coverage_floor: 0.5,
            ..Default::default()
        };
        let t = compute_factors(&words, &inputs).unwrap();
        assert!(!t.available[0]);
        assert!(!t.warnings.is_empty());
    }

    #[test]
    fn imputation_fills_and_flags() {
        use crate::semantics::MeaningsDB;
        let mut db = MeaningsDB::default();
        db.entries.insert("a".to_string(), vec![(1700, None), (1750, None)]);
        db.entries.insert("b".to_string(), vec![(1600, None)] );
        db.entries.insert(
            "b2".to_string(),
            vec![(1500, None), (1600, None), (1700, None)],
        );
        let words: Vec<String> = vec!["a".into(), "b".into(), "b2".into(), "zmissing".into()];
        let inputs = FactorInputs {
            meanings: Some(&db),
            coverage_floor: 0.2,
            ..Default::default()
        };
        let t = compute_factors(&words, &inputs).unwrap();
        assert!(t.available[2]);
        assert_eq!(t.rows["a"].values[2], Some(2.0));
        assert_eq!(t.rows["zmissing"].values[2], Some(2.0)); // mean of 2, 1, 3
        assert!(t.rows["zmissing"].imputed[2]);
        assert!(!t.rows["a"].imputed[2]);
        assert!((t.coverage[2] - 0.75).abs() < 1e-12);
    }
}
