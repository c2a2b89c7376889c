//! Seeded synthetic input bundles with plantable effects.
//!
//! One generator run writes every file the pipeline consumes: decade-binned
//! frequencies and corpus metadata, per-decade tokenized text, embeddings,
//! concreteness ratings, a meanings database, and a pronunciation lexicon.
//! Declining words follow a line-to-zero frequency shape with multiplicative
//! log-normal noise; stable controls hold a level. Factor gaps are planted
//! in the configured directions:
//!
//! - declining words sit in tight embedding clusters (higher semantic
//!   density) and low on the concreteness axis;
//! - declining words get fewer dated meanings;
//! - each word's context distribution is a Dirichlet perturbation of the
//!   background prior over a truncated support, with the concentration as
//!   the diversity knob (low for declining words, decaying over decades so
//!   their contextual niches narrow; high and growing for stable words).
//!
//! Identical seeds produce byte-identical bundles: generation consumes one
//! sequential RNG stream and every file is written in a fixed order.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};

use crate::error::{Error, Result};

/// POS classes with their fixed planted-word lengths. Equal lengths within a
/// class keep any POS-respecting matching at a zero total-length deficit.
pub const POS_CLASSES: [(&str, usize); 3] = [("NOUN", 7), ("VERB", 6), ("ADJ", 8)];

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub seed: u64,
    /// Total distinct words (head + planted + filler).
    pub vocab_size: usize,
    pub n_dec: usize,
    pub n_stb: usize,
    pub decades: usize,
    /// Background word-distribution exponent.
    pub zipf_exponent: f64,
    pub head_words: usize,
    /// Log-uniform range of planted initial relative frequencies.
    pub rel0_range: (f64, f64),
    /// Decline crossings drawn uniformly from here (clears the crossing filter).
    pub decline_b_range: (f64, f64),
    pub freq_noise_dec: f64,
    pub freq_noise_stb: f64,
    pub freq_noise_filler: f64,
    pub tokens_per_decade: u64,
    pub books_base: u64,
    pub books_growth: u64,
    /// Raw-count floor for declining words after the crossing.
    pub tail_floor_count: u64,
    /// Context occurrences per decade for planted words (declining words
    /// decay from here) and for fillers.
    pub ctx_occ_planted: usize,
    pub ctx_occ_filler: usize,
    /// Dirichlet support: the top-N background words.
    pub ctx_support: usize,
    /// Context-concentration knobs (the diversity gap).
    pub alpha_dec0: f64,
    pub alpha_stb0: f64,
    /// Per-decade multipliers on the concentrations (dec < 1 narrows niches,
    /// stb > 1 broadens them).
    pub alpha_dec_decay: f64,
    pub alpha_stb_growth: f64,
    pub embedding_dim: usize,
    /// Declining words per embedding cluster (> knn so neighbors stay in-cluster).
    pub cluster_size: usize,
    pub cluster_eps: f64,
    pub n_filler_embeddings: usize,
    /// Concreteness-axis centers (the concreteness gap) and noise.
    pub conc_axis_dec: f64,
    pub conc_axis_stb: f64,
    pub conc_axis_noise: f64,
    /// Generator weight mapping the axis to ratings.
    pub conc_weight: f64,
    pub n_rating_words: usize,
    pub rating_noise: f64,
    /// Meaning-count gap (means of the planted Poisson-plus-one counts).
    pub meanings_dec_mean: f64,
    pub meanings_stb_mean: f64,
    pub meanings_coverage: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            vocab_size: 10_000,
            n_dec: 300,
            n_stb: 300,
            decades: 21,
            zipf_exponent: 1.0,
            head_words: 100,
            rel0_range: (6e-6, 5e-4),
            decline_b_range: (12.0, 20.0),
            freq_noise_dec: 0.08,
            freq_noise_stb: 0.03,
            freq_noise_filler: 0.45,
            tokens_per_decade: 5_000_000,
            books_base: 400,
            books_growth: 35,
            tail_floor_count: 2,
            ctx_occ_planted: 60,
            ctx_occ_filler: 8,
            ctx_support: 300,
            alpha_dec0: 6.0,
            alpha_stb0: 60.0,
            alpha_dec_decay: 0.82,
            alpha_stb_growth: 1.06,
            embedding_dim: 16,
            cluster_size: 12,
            cluster_eps: 0.18,
            n_filler_embeddings: 3000,
            conc_axis_dec: -0.25,
            conc_axis_stb: 0.25,
            conc_axis_noise: 0.45,
            conc_weight: 3.0,
            n_rating_words: 2000,
            rating_noise: 0.05,
            meanings_dec_mean: 2.0,
            meanings_stb_mean: 5.0,
            meanings_coverage: 0.9,
        }
    }
}

impl SynthConfig {
    fn validate(&self) -> Result<()> {
        let planted = self.n_dec + self.n_stb;
        if self.vocab_size < self.head_words + planted + self.ctx_support {
            return Err(Error::Config {
                msg: format!(
                    "vocab_size {} cannot hold {} head + {} planted + {} support words",
                    self.vocab_size, self.head_words, planted, self.ctx_support
                ),
            });
        }
        let fillers = self.vocab_size - self.head_words - planted;
        if fillers < self.n_filler_embeddings {
            return Err(Error::Config {
                msg: format!(
                    "{fillers} filler words cannot carry {} filler embeddings",
                    self.n_filler_embeddings
                ),
            });
        }
        if self.n_rating_words > self.n_filler_embeddings {
            return Err(Error::Config {
                msg: format!(
                    "{} rating words exceed the {} embedded fillers",
                    self.n_rating_words, self.n_filler_embeddings
                ),
            });
        }
        if self.n_dec == 0 || self.n_stb == 0 || self.decades < 2 {
            return Err(Error::Config {
                msg: "need positive planted sets and at least 2 decades".into(),
            });
        }
        if self.rel0_range.0 <= 0.0 || self.rel0_range.1 <= self.rel0_range.0 {
            return Err(Error::Config {
                msg: "rel0 range must be positive and increasing".into(),
            });
        }
        if self.decline_b_range.1 > self.decades as f64 {
            return Err(Error::Config {
                msg: "decline crossings must fall inside the decade axis".into(),
            });
        }
        if self.cluster_size < 2 {
            return Err(Error::Config {
                msg: "cluster size must be at least 2".into(),
            });
        }
        if self.alpha_dec0 <= 0.0 || self.alpha_stb0 <= 0.0 {
            return Err(Error::Config {
                msg: "context concentrations must be positive".into(),
            });
        }
        Ok(())
    }
}

/// A planted word with its generator ground truth.
#[derive(Debug, Clone)]
pub struct PlantedWord {
    pub word: String,
    pub pos: String,
    pub pair_index: usize,
    /// Crossing decade for decliners.
    pub crossing: Option<f64>,
    pub rel0: f64,
}

/// Paths of the generated bundle plus the planted ground truth.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub frequencies: PathBuf,
    pub meta: PathBuf,
    pub tokens_dir: PathBuf,
    pub embeddings: PathBuf,
    pub pronunciations: PathBuf,
    pub vowels: PathBuf,
    pub meanings: PathBuf,
    pub concreteness: PathBuf,
    pub planted: PathBuf,
    pub dec_words: Vec<PlantedWord>,
    pub stb_words: Vec<PlantedWord>,
}

const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];
const CONSONANTS: [char; 16] = [
    'b', 'd', 'f', 'g', 'h', 'k', 'l', 'm', 'n', 'p', 'r', 's', 't', 'v', 'w', 'z',
];

fn make_word(rng: &mut ChaCha8Rng, len: usize, taken: &mut HashSet<String>) -> String {
    loop {
        let mut w = String::with_capacity(len);
        for i in 0..len {
            if i % 2 == 0 {
                w.push(CONSONANTS[rng.gen_range(0..CONSONANTS.len())]);
            } else {
                w.push(VOWELS[rng.gen_range(0..VOWELS.len())]);
            }
        }
        if taken.insert(w.clone()) {
            return w;
        }
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

struct WordPlan {
    word: String,
    pos: String,
    role: Role,
    /// Relative-frequency series over the decades.
    rel: Vec<f64>,
    /// Context occurrences per decade in the token files.
    ctx_occ: Vec<usize>,
    /// Concentration per decade (planted words only).
    alpha: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Head,
    Dec(usize),
    Stb(usize),
    Filler,
}

/// Generate the full bundle under `out_dir`.
pub fn generate(config: &SynthConfig, out_dir: &Path) -> Result<SynthOutput> {
    config.validate()?;
    let c = config;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);

    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let tokens_dir = out_dir.join("tokens");
    fs::create_dir_all(&tokens_dir).map_err(|e| Error::io(&tokens_dir, e))?;

    // ---- corpus-wide totals ------------------------------------------------
    let tokens_per_decade: Vec<u64> = (0..c.decades)
        .map(|t| (c.tokens_per_decade as f64 * (1.0 + 0.015 * t as f64)).round() as u64)
        .collect();
    let books_per_decade: Vec<u64> = (0..c.decades)
        .map(|t| {
            let jitter: f64 = standard_normal(&mut rng) * 5.0;
            ((c.books_base + c.books_growth * t as u64) as f64 + jitter).max(50.0).round() as u64
        })
        .collect();

    // ---- words -------------------------------------------------------------
    let mut taken = HashSet::new();
    let heads: Vec<String> = (0..c.head_words)
        .map(|_| make_word(&mut rng, 3, &mut taken))
        .collect();

    let mut dec_words = Vec::with_capacity(c.n_dec);
    let mut stb_words = Vec::with_capacity(c.n_stb);
    let n_pairs = c.n_dec.min(c.n_stb);
    for i in 0..c.n_dec.max(c.n_stb) {
        let (pos, len) = POS_CLASSES[i % POS_CLASSES.len()];
        let log_lo = c.rel0_range.0.ln();
        let log_hi = c.rel0_range.1.ln();
        let rel0 = (log_lo + (log_hi - log_lo) * rng.gen::<f64>()).exp();
        if i < c.n_dec {
            let b = rng.gen_range(c.decline_b_range.0..=c.decline_b_range.1);
            dec_words.push(PlantedWord {
                word: make_word(&mut rng, len, &mut taken),
                pos: pos.to_string(),
                pair_index: i,
                crossing: Some(b),
                rel0,
            });
        }
        if i < c.n_stb {
            // partner sits inside the matching window of the decliner above
            let partner_rel0 = if i < n_pairs {
                dec_words[i].rel0 * (1.0 + 0.01 * (rng.gen::<f64>() * 2.0 - 1.0))
            } else {
                rel0
            };
            stb_words.push(PlantedWord {
                word: make_word(&mut rng, len, &mut taken),
                pos: pos.to_string(),
                pair_index: i,
                crossing: None,
                rel0: partner_rel0,
            });
        }
    }

    let n_fillers = c.vocab_size - c.head_words - c.n_dec - c.n_stb;
    let fillers: Vec<String> = (0..n_fillers)
        .map(|_| {
            let len = rng.gen_range(4..=9usize);
            make_word(&mut rng, len, &mut taken)
        })
        .collect();

    // pool order fixes the background ranks of planted and filler words
    let mut pool: Vec<(String, Role)> = Vec::with_capacity(c.vocab_size - c.head_words);
    for (i, w) in dec_words.iter().enumerate() {
        pool.push((w.word.clone(), Role::Dec(i)));
    }
    for (i, w) in stb_words.iter().enumerate() {
        pool.push((w.word.clone(), Role::Stb(i)));
    }
    for w in &fillers {
        pool.push((w.clone(), Role::Filler));
    }
    // Fisher-Yates on the pool, seeded
    for i in (1..pool.len()).rev() {
        let j = rng.gen_range(0..=i);
        pool.swap(i, j);
    }

    // ---- frequency series ----------------------------------------------------
    // consumed RNG order: heads, then declining, then stable, then fillers
    let mut plans: Vec<WordPlan> = Vec::with_capacity(c.vocab_size);
    for (k, w) in heads.iter().enumerate() {
        let level = 0.03 / (k + 1) as f64;
        let rel: Vec<f64> = (0..c.decades)
            .map(|t| {
                if t == 0 {
                    level
                } else {
                    level * (0.1 * standard_normal(&mut rng)).exp()
                }
            })
            .collect();
        plans.push(WordPlan {
            word: w.clone(),
            pos: "X".to_string(),
            role: Role::Head,
            rel,
            ctx_occ: vec![0; c.decades],
            alpha: Vec::new(),
        });
    }
    for (i, pw) in dec_words.iter().enumerate() {
        let b = pw.crossing.unwrap();
        let floor_rel = c.tail_floor_count as f64 / c.tokens_per_decade as f64;
        let rel: Vec<f64> = (0..c.decades)
            .map(|idx| {
                let t = (idx + 1) as f64;
                let shape = if t <= b { pw.rel0 * (b - t) / (b - 1.0) } else { 0.0 };
                if idx == 0 {
                    pw.rel0
                } else {
                    let noisy = shape * (c.freq_noise_dec * standard_normal(&mut rng)).exp();
                    noisy.max(floor_rel)
                }
            })
            .collect();
        let ctx_occ: Vec<usize> = (0..c.decades)
            .map(|idx| {
                let t = (idx + 1) as f64;
                let scale = if t <= b { (b - t) / (b - 1.0) } else { 0.0 };
                ((c.ctx_occ_planted as f64 * scale).round() as usize).max(2)
            })
            .collect();
        let alpha: Vec<f64> = (0..c.decades)
            .map(|t| (c.alpha_dec0 * c.alpha_dec_decay.powi(t as i32)).max(1e-3))
            .collect();
        plans.push(WordPlan {
            word: pw.word.clone(),
            pos: pw.pos.clone(),
            role: Role::Dec(i),
            rel,
            ctx_occ,
            alpha,
        });
    }
    for (i, pw) in stb_words.iter().enumerate() {
        let rel: Vec<f64> = (0..c.decades)
            .map(|idx| {
                if idx == 0 {
                    pw.rel0
                } else {
                    pw.rel0 * (c.freq_noise_stb * standard_normal(&mut rng)).exp()
                }
            })
            .collect();
        let alpha: Vec<f64> = (0..c.decades)
            .map(|t| (c.alpha_stb0 * c.alpha_stb_growth.powi(t as i32)).min(1e4))
            .collect();
        plans.push(WordPlan {
            word: pw.word.clone(),
            pos: pw.pos.clone(),
            role: Role::Stb(i),
            rel,
            ctx_occ: vec![c.ctx_occ_planted; c.decades],
            alpha,
        });
    }
    for w in &fillers {
        let log_level = (1e-6f64).ln() + ((1e-3f64).ln() - (1e-6f64).ln()) * rng.gen::<f64>();
        let level = log_level.exp();
        let pos = POS_CLASSES[rng.gen_range(0..POS_CLASSES.len())].0;
        let rel: Vec<f64> = (0..c.decades)
            .map(|_| level * (c.freq_noise_filler * standard_normal(&mut rng)).exp())
            .collect();
        plans.push(WordPlan {
            word: w.clone(),
            pos: pos.to_string(),
            role: Role::Filler,
            rel,
            ctx_occ: vec![c.ctx_occ_filler; c.decades],
            alpha: Vec::new(),
        });
    }

    // ---- meta + frequency files ---------------------------------------------
    let meta_path = out_dir.join("meta.tsv");
    {
        let mut f = BufWriter::new(File::create(&meta_path).map_err(|e| Error::io(&meta_path, e))?);
        for t in 0..c.decades {
            writeln!(f, "{t}\t{}\t{}", tokens_per_decade[t], books_per_decade[t])
                .map_err(|e| Error::io(&meta_path, e))?;
        }
    }

    let freq_path = out_dir.join("frequencies.tsv");
    {
        let mut rows: Vec<(String, String, Vec<u64>)> = plans
            .iter()
            .map(|p| {
                let floor = match p.role {
                    Role::Dec(_) => c.tail_floor_count,
                    _ => 1,
                };
                let raw: Vec<u64> = (0..c.decades)
                    .map(|t| ((p.rel[t] * tokens_per_decade[t] as f64).round() as u64).max(floor))
                    .collect();
                (p.word.clone(), p.pos.clone(), raw)
            })
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut f = BufWriter::new(File::create(&freq_path).map_err(|e| Error::io(&freq_path, e))?);
        for (word, pos, raw) in rows {
            let counts: Vec<String> = raw.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{word}\t{pos}\t{}", counts.join("\t"))
                .map_err(|e| Error::io(&freq_path, e))?;
        }
    }

    // ---- embeddings, ratings --------------------------------------------------
    let d = c.embedding_dim;
    let mut embeddings: Vec<(String, Vec<f64>)> = Vec::new();
    let n_clusters = (c.n_dec + c.cluster_size - 1) / c.cluster_size;
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(n_clusters);
    for _ in 0..n_clusters {
        let mut v: Vec<f64> = (0..d - 1).map(|_| standard_normal(&mut rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        v.iter_mut().for_each(|x| *x /= norm);
        centers.push(v);
    }
    for (i, pw) in dec_words.iter().enumerate() {
        let center = &centers[i / c.cluster_size];
        let mut v: Vec<f64> = center
            .iter()
            .map(|x| x + c.cluster_eps * standard_normal(&mut rng))
            .collect();
        v.push(c.conc_axis_dec + c.conc_axis_noise * standard_normal(&mut rng));
        embeddings.push((pw.word.clone(), v));
    }
    for pw in &stb_words {
        let mut v: Vec<f64> = (0..d - 1).map(|_| standard_normal(&mut rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        v.iter_mut().for_each(|x| *x /= norm);
        v.push(c.conc_axis_stb + c.conc_axis_noise * standard_normal(&mut rng));
        embeddings.push((pw.word.clone(), v));
    }
    let mut rating_rows: Vec<(String, f64)> = Vec::with_capacity(c.n_rating_words);
    for (k, w) in fillers.iter().take(c.n_filler_embeddings).enumerate() {
        let mut v: Vec<f64> = (0..d - 1).map(|_| standard_normal(&mut rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        v.iter_mut().for_each(|x| *x /= norm);
        v.push(1.8 * (rng.gen::<f64>() - 0.5));
        if k < c.n_rating_words {
            let axis = v[d - 1];
            let mean = 1.0 / (1.0 + (-c.conc_weight * axis).exp());
            let rating =
                (mean + c.rating_noise * standard_normal(&mut rng)).clamp(0.02, 0.98);
            rating_rows.push((w.clone(), rating));
        }
        embeddings.push((w.clone(), v));
    }
    embeddings.sort_by(|a, b| a.0.cmp(&b.0));
    let emb_path = out_dir.join("embeddings.txt");
    {
        let mut f = BufWriter::new(File::create(&emb_path).map_err(|e| Error::io(&emb_path, e))?);
        for (w, v) in &embeddings {
            let comps: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
            writeln!(f, "{w} {}", comps.join(" ")).map_err(|e| Error::io(&emb_path, e))?;
        }
    }
    rating_rows.sort_by(|a, b| a.0.cmp(&b.0));
    let conc_path = out_dir.join("concreteness.tsv");
    {
        let mut f = BufWriter::new(File::create(&conc_path).map_err(|e| Error::io(&conc_path, e))?);
        for (w, r) in &rating_rows {
            writeln!(f, "{w}\t{r:.6}").map_err(|e| Error::io(&conc_path, e))?;
        }
    }

    // ---- meanings --------------------------------------------------------------
    let meanings_path = out_dir.join("meanings.tsv");
    {
        let mut rows: Vec<(String, i32, Option<i32>)> = Vec::new();
        let mut plant_meanings =
            |pw: &PlantedWord, mean: f64, rng: &mut ChaCha8Rng, rows: &mut Vec<(String, i32, Option<i32>)>| {
                if rng.gen::<f64>() > c.meanings_coverage {
                    return; // word left out of the database
                }
                let lambda = (mean - 1.0).max(0.05);
                let extra = Poisson::new(lambda).expect("positive lambda").sample(rng) as usize;
                let n_active = 1 + extra;
                for _ in 0..n_active {
                    let first = 1500 + rng.gen_range(0..300);
                    rows.push((pw.word.clone(), first, None));
                }
                // occasional expired meaning, ends before the analysis window
                if rng.gen::<f64>() < 0.3 {
                    let first = 1400 + rng.gen_range(0..200);
                    rows.push((pw.word.clone(), first, Some(1700 + rng.gen_range(0..80))));
                }
            };
        for pw in &dec_words {
            plant_meanings(pw, c.meanings_dec_mean, &mut rng, &mut rows);
        }
        for pw in &stb_words {
            plant_meanings(pw, c.meanings_stb_mean, &mut rng, &mut rows);
        }
        rows.sort();
        let mut f =
            BufWriter::new(File::create(&meanings_path).map_err(|e| Error::io(&meanings_path, e))?);
        for (w, first, last) in rows {
            match last {
                Some(l) => writeln!(f, "{w}\t{first}\t{l}"),
                None => writeln!(f, "{w}\t{first}\t"),
            }
            .map_err(|e| Error::io(&meanings_path, e))?;
        }
    }

    // ---- pronunciations ----------------------------------------------------------
    let pron_path = out_dir.join("pronunciations.tsv");
    let vowels_path = out_dir.join("vowels.txt");
    {
        let mut all_words: Vec<&String> = heads.iter().collect();
        all_words.extend(pool.iter().map(|(w, _)| w));
        all_words.sort();
        let mut f = BufWriter::new(File::create(&pron_path).map_err(|e| Error::io(&pron_path, e))?);
        for w in all_words {
            let phones: Vec<String> = w.chars().map(|ch| ch.to_string()).collect();
            writeln!(f, "{w}\t{}", phones.join(" ")).map_err(|e| Error::io(&pron_path, e))?;
        }
        let mut vf =
            BufWriter::new(File::create(&vowels_path).map_err(|e| Error::io(&vowels_path, e))?);
        for v in VOWELS {
            writeln!(vf, "{v}").map_err(|e| Error::io(&vowels_path, e))?;
        }
    }

    // ---- token files ----------------------------------------------------------------
    // background distribution over [heads ++ pool], Zipf by position
    let global_words: Vec<&String> = heads.iter().chain(pool.iter().map(|(w, _)| w)).collect();
    let z_weights: Vec<f64> = (0..global_words.len())
        .map(|i| 1.0 / ((i + 1) as f64).powf(c.zipf_exponent))
        .collect();
    let mut z_cum = Vec::with_capacity(z_weights.len());
    let mut acc = 0.0;
    for w in &z_weights {
        acc += w;
        z_cum.push(acc);
    }
    let z_total = acc;

    // truncated support for the planted Dirichlet perturbations
    let support: Vec<usize> = (0..c.ctx_support).collect();
    let support_weights: Vec<f64> = support.iter().map(|&i| z_weights[i]).collect();
    let support_total: f64 = support_weights.iter().sum();

    // map word -> plan index for pool iteration
    let plan_index: std::collections::HashMap<&str, usize> = plans
        .iter()
        .enumerate()
        .map(|(i, p)| (p.word.as_str(), i))
        .collect();

    for t in 0..c.decades {
        let path = tokens_dir.join(format!("decade_{t:02}.txt"));
        let mut f = BufWriter::new(File::create(&path).map_err(|e| Error::io(&path, e))?);
        for (word, _) in &pool {
            let plan = &plans[plan_index[word.as_str()]];
            let occ = plan.ctx_occ[t];
            if occ == 0 {
                continue;
            }
            // per-word context distribution for this decade
            let cum: Vec<f64>;
            let total: f64;
            let use_support: bool;
            if plan.alpha.is_empty() {
                cum = Vec::new();
                total = 0.0;
                use_support = false;
            } else {
                // Dirichlet(alpha * truncated prior) via Gamma draws
                let alpha = plan.alpha[t];
                let mut draws = Vec::with_capacity(support.len());
                let mut s = 0.0;
                for w in &support_weights {
                    let shape = (alpha * w / support_total).max(1e-8);
                    let g = Gamma::new(shape, 1.0).expect("valid shape").sample(&mut rng);
                    s += g;
                    draws.push(s);
                }
                cum = draws;
                total = s;
                use_support = true;
            }
            for _ in 0..occ {
                let mut draw = |rng: &mut ChaCha8Rng| -> &str {
                    if use_support && total > 0.0 {
                        let r = rng.gen::<f64>() * total;
                        let idx = cum.partition_point(|&x| x < r).min(support.len() - 1);
                        global_words[support[idx]]
                    } else {
                        let r = rng.gen::<f64>() * z_total;
                        let idx = z_cum.partition_point(|&x| x < r).min(global_words.len() - 1);
                        global_words[idx]
                    }
                };
                let left = draw(&mut rng);
                let right = draw(&mut rng);
                writeln!(f, "{left} {word} {right}").map_err(|e| Error::io(&path, e))?;
            }
        }
    }

    // ---- planted ground truth ----------------------------------------------------
    let planted_path = out_dir.join("planted.tsv");
    {
        let mut f =
            BufWriter::new(File::create(&planted_path).map_err(|e| Error::io(&planted_path, e))?);
        for pw in &dec_words {
            writeln!(
                f,
                "{}\tdec\t{}\t{}\t{:.4}\t{:.9e}",
                pw.word,
                pw.pos,
                pw.pair_index,
                pw.crossing.unwrap_or(0.0),
                pw.rel0
            )
            .map_err(|e| Error::io(&planted_path, e))?;
        }
        for pw in &stb_words {
            writeln!(
                f,
                "{}\tstb\t{}\t{}\t\t{:.9e}",
                pw.word, pw.pos, pw.pair_index, pw.rel0
            )
            .map_err(|e| Error::io(&planted_path, e))?;
        }
    }

    Ok(SynthOutput {
        frequencies: freq_path,
        meta: meta_path,
        tokens_dir,
        embeddings: emb_path,
        pronunciations: pron_path,
        vowels: vowels_path,
        meanings: meanings_path,
        concreteness: conc_path,
        planted: planted_path,
        dec_words,
        stb_words,
    })
}
