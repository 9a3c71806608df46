//! Shared fixtures for the criterion benchmarks.

use signilp::factext::ExtractConfig;
use signilp::harness::{example_atom, Corpus, BUNDLED_METARULES, BUNDLED_MODES};
use signilp::logic::ExampleSet;
use signilp::lptext::{parse_metarules, parse_modes};
use signilp::mdie::ModeDecl;
use signilp::mil::Metarule;
use signilp::scene::{DatasetConfig, Variant};

pub struct Fixture {
    pub corpus: Corpus,
    pub modes: Vec<ModeDecl>,
    pub metarules: Vec<Metarule>,
}

impl Fixture {
    /// A base dataset of 20 stop signs and 20 others, already extracted.
    pub fn new() -> Self {
        let corpus = Corpus::generate(&DatasetConfig::new(20, 20, Variant::Base, 1), &ExtractConfig::default())
            .expect("base dataset renders");
        Fixture {
            corpus,
            modes: parse_modes(BUNDLED_MODES).expect("bundled modes parse"),
            metarules: parse_metarules(BUNDLED_METARULES).expect("bundled metarules parse"),
        }
    }

    /// The first `n` signs of each class as training examples.
    pub fn examples(&self, n: usize) -> ExampleSet {
        let pos = self.corpus.positives().iter().take(n).map(|i| example_atom(&i.sign_id)).collect();
        let neg = self.corpus.negatives().iter().take(n).map(|i| example_atom(&i.sign_id)).collect();
        ExampleSet::new(pos, neg)
    }
}

impl Default for Fixture {
    fn default() -> Self {
        Self::new()
    }
}
