//! One-hidden-layer perceptron: dense ReLU hidden layer, softmax output,
//! cross-entropy loss, Adam updates.
//!
//! Inputs are tf-idf vectors with a few dozen non-zeros out of a few
//! thousand features, so the first layer is evaluated and differentiated
//! sparsely. Parameter updates stay dense.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::tfidf::SparseVector;
use crate::error::{Error, Result};

pub const DEFAULT_HIDDEN: usize = 512;

/// Weights are row-major: `w1[j * hidden + h]`, `w2[h * classes + k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MlpParams {
    pub inputs: usize,
    pub hidden: usize,
    pub classes: usize,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

/// `inputs*hidden + hidden + hidden*classes + classes`.
pub fn param_count_for(inputs: usize, hidden: usize, classes: usize) -> usize {
    inputs * hidden + hidden + hidden * classes + classes
}

impl MlpParams {
    pub fn zeros(inputs: usize, hidden: usize, classes: usize) -> Self {
        MlpParams {
            inputs,
            hidden,
            classes,
            w1: vec![0.0; inputs * hidden],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden * classes],
            b2: vec![0.0; classes],
        }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn glorot<R: Rng>(inputs: usize, hidden: usize, classes: usize, rng: &mut R) -> Self {
        let mut p = MlpParams::zeros(inputs, hidden, classes);
        let l1 = (6.0 / (inputs + hidden) as f64).sqrt();
        let l2 = (6.0 / (hidden + classes) as f64).sqrt();
        p.w1.iter_mut().for_each(|w| *w = rng.random_range(-l1..l1));
        p.w2.iter_mut().for_each(|w| *w = rng.random_range(-l2..l2));
        p
    }

    pub fn param_count(&self) -> usize {
        param_count_for(self.inputs, self.hidden, self.classes)
    }

    pub fn is_finite(&self) -> bool {
        self.buffers()
            .iter()
            .all(|b| b.iter().all(|v| v.is_finite()))
    }

    /// `[w1, b1, w2, b2]`, the serialization order.
    pub fn buffers(&self) -> [&Vec<f64>; 4] {
        [&self.w1, &self.b1, &self.w2, &self.b2]
    }

    pub fn buffers_mut(&mut self) -> [&mut Vec<f64>; 4] {
        [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2]
    }

    fn check_shape(&self) -> Result<()> {
        let ok = self.w1.len() == self.inputs * self.hidden
            && self.b1.len() == self.hidden
            && self.w2.len() == self.hidden * self.classes
            && self.b2.len() == self.classes;
        if ok {
            Ok(())
        } else {
            Err(Error::Numeric(
                "parameter buffers do not match layer sizes".into(),
            ))
        }
    }
}

/// Intermediate values of one forward pass.
#[derive(Clone, Debug)]
pub struct Activations {
    pub hidden_pre: Vec<f64>,
    pub hidden: Vec<f64>,
    pub probs: Vec<f64>,
}

pub(crate) fn forward_sparse(p: &MlpParams, x: &SparseVector) -> Activations {
    let mut hidden_pre = p.b1.clone();
    for (j, xj) in x.iter() {
        let row = &p.w1[j * p.hidden..(j + 1) * p.hidden];
        for (acc, w) in hidden_pre.iter_mut().zip(row) {
            *acc += xj * w;
        }
    }
    let hidden: Vec<f64> = hidden_pre.iter().map(|&v| v.max(0.0)).collect();
    let mut logits = p.b2.clone();
    for (h, &a) in hidden.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let row = &p.w2[h * p.classes..(h + 1) * p.classes];
        for (acc, w) in logits.iter_mut().zip(row) {
            *acc += a * w;
        }
    }
    Activations {
        hidden_pre,
        hidden,
        probs: softmax(&logits),
    }
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Class probabilities for a dense input.
pub fn forward(p: &MlpParams, x: &[f64]) -> Result<Vec<f64>> {
    p.check_shape()?;
    if x.len() != p.inputs {
        return Err(Error::domain(format!(
            "input has {} features, network expects {}",
            x.len(),
            p.inputs
        )));
    }
    if !p.is_finite() {
        return Err(Error::Numeric("non-finite network parameters".into()));
    }
    Ok(forward_sparse(p, &SparseVector::from_dense(x)).probs)
}

/// Per-sample quantities needed to form gradients.
struct Trace {
    hidden: Vec<f64>,
    /// dL/d(hidden pre-activation)
    delta_hidden: Vec<f64>,
    /// dL/d(logits) = probs - one_hot(label)
    delta_out: Vec<f64>,
    loss: f64,
}

fn trace(p: &MlpParams, x: &SparseVector, label: usize) -> Trace {
    let act = forward_sparse(p, x);
    let loss = -act.probs[label].max(f64::MIN_POSITIVE).ln();
    let mut delta_out = act.probs;
    delta_out[label] -= 1.0;
    let delta_hidden = (0..p.hidden)
        .map(|h| {
            if act.hidden_pre[h] > 0.0 {
                let row = &p.w2[h * p.classes..(h + 1) * p.classes];
                row.iter().zip(&delta_out).map(|(w, d)| w * d).sum()
            } else {
                0.0
            }
        })
        .collect();
    Trace {
        hidden: act.hidden,
        delta_hidden,
        delta_out,
        loss,
    }
}

/// Cross-entropy of one sample.
pub fn loss(p: &MlpParams, x: &[f64], label: usize) -> Result<f64> {
    let probs = forward(p, x)?;
    Ok(-probs[label].ln())
}

/// Exact gradient of the cross-entropy loss of one sample with respect to
/// every parameter, laid out like `p`.
pub fn backward(p: &MlpParams, x: &[f64], label: usize) -> Result<MlpParams> {
    p.check_shape()?;
    if x.len() != p.inputs {
        return Err(Error::domain("input length does not match network"));
    }
    if label >= p.classes {
        return Err(Error::domain(format!("label {label} out of range")));
    }
    let xs = SparseVector::from_dense(x);
    let t = trace(p, &xs, label);
    let mut g = MlpParams::zeros(p.inputs, p.hidden, p.classes);
    accumulate(&mut g, &[(&xs, &t)], 1.0);
    Ok(g)
}

/// Adds `scale * gradient` of each traced sample into `g`. Only rows of
/// `w1` in the inputs' support are written.
fn accumulate(g: &mut MlpParams, samples: &[(&SparseVector, &Trace)], scale: f64) {
    let (hidden, classes) = (g.hidden, g.classes);
    for (_, t) in samples {
        for (b, d) in g.b2.iter_mut().zip(&t.delta_out) {
            *b += scale * d;
        }
        for (b, d) in g.b1.iter_mut().zip(&t.delta_hidden) {
            *b += scale * d;
        }
    }
    g.w2.par_chunks_mut(classes)
        .enumerate()
        .for_each(|(h, row)| {
            for (_, t) in samples {
                let a = t.hidden[h];
                if a == 0.0 {
                    continue;
                }
                for (w, d) in row.iter_mut().zip(&t.delta_out) {
                    *w += scale * a * d;
                }
            }
        });
    for (x, t) in samples {
        for (j, xj) in x.iter() {
            let row = &mut g.w1[j * hidden..(j + 1) * hidden];
            for (w, d) in row.iter_mut().zip(&t.delta_hidden) {
                *w += scale * xj * d;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub hidden: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 20,
            batch_size: 32,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            seed: 42,
            hidden: DEFAULT_HIDDEN,
        }
    }
}

struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    step: i32,
    m: MlpParams,
    v: MlpParams,
}

impl Adam {
    fn new(config: &TrainConfig, shape: &MlpParams) -> Self {
        let zeros = MlpParams::zeros(shape.inputs, shape.hidden, shape.classes);
        Adam {
            lr: config.learning_rate,
            beta1: config.beta1,
            beta2: config.beta2,
            epsilon: config.epsilon,
            step: 0,
            m: zeros.clone(),
            v: zeros,
        }
    }

    fn update(&mut self, params: &mut MlpParams, grads: &MlpParams) {
        self.step += 1;
        let (b1, b2, eps) = (self.beta1, self.beta2, self.epsilon);
        let c1 = 1.0 - b1.powi(self.step);
        let c2 = 1.0 - b2.powi(self.step);
        let lr = self.lr;
        let [mw1, mb1, mw2, mb2] = self.m.buffers_mut();
        let [vw1, vb1, vw2, vb2] = self.v.buffers_mut();
        let state = [(mw1, vw1), (mb1, vb1), (mw2, vw2), (mb2, vb2)];
        for ((p, g), (m, v)) in params
            .buffers_mut()
            .into_iter()
            .zip(grads.buffers())
            .zip(state)
        {
            p.par_iter_mut()
                .zip(g.par_iter())
                .zip(m.par_iter_mut())
                .zip(v.par_iter_mut())
                .with_min_len(4096)
                .for_each(|(((p, &g), m), v)| {
                    *m = b1 * *m + (1.0 - b1) * g;
                    *v = b2 * *v + (1.0 - b2) * g * g;
                    let m_hat = *m / c1;
                    let v_hat = *v / c2;
                    *p -= lr * m_hat / (v_hat.sqrt() + eps);
                });
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub params: MlpParams,
    /// Mean training loss of each epoch, measured before each batch update.
    pub epoch_losses: Vec<f64>,
}

/// Mini-batch Adam on cross-entropy. Shuffling and initialization both come
/// from `config.seed`, so identical inputs give bit-identical parameters.
pub fn train_network(
    features: &[SparseVector],
    targets: &[usize],
    inputs: usize,
    classes: usize,
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    if features.len() != targets.len() {
        return Err(Error::domain("features and targets differ in length"));
    }
    if features.is_empty() {
        return Err(Error::Training("no training samples".into()));
    }
    if config.epochs == 0 || config.batch_size == 0 || config.hidden == 0 {
        return Err(Error::domain(
            "epochs, batch size and hidden size must be at least 1",
        ));
    }
    if let Some(&t) = targets.iter().find(|&&t| t >= classes) {
        return Err(Error::domain(format!(
            "target {t} out of range for {classes} classes"
        )));
    }
    if features
        .iter()
        .flat_map(|x| &x.indices)
        .any(|&j| j >= inputs)
    {
        return Err(Error::domain("feature index out of range"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = MlpParams::glorot(inputs, config.hidden, classes, &mut rng);
    let mut adam = Adam::new(config, &params);
    let mut grads = MlpParams::zeros(inputs, config.hidden, classes);
    let mut order: Vec<usize> = (0..features.len()).collect();
    let mut epoch_losses = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for batch in order.chunks(config.batch_size) {
            let traces: Vec<Trace> = batch
                .par_iter()
                .map(|&i| trace(&params, &features[i], targets[i]))
                .collect();
            let batch_loss: f64 = traces.iter().map(|t| t.loss).sum();
            if !batch_loss.is_finite() {
                return Err(Error::Training(format!(
                    "loss diverged in epoch {}",
                    epoch + 1
                )));
            }
            loss_sum += batch_loss;

            grads.b1.iter_mut().for_each(|v| *v = 0.0);
            grads.b2.iter_mut().for_each(|v| *v = 0.0);
            grads.w2.par_iter_mut().for_each(|v| *v = 0.0);
            let samples: Vec<(&SparseVector, &Trace)> =
                batch.iter().map(|&i| &features[i]).zip(&traces).collect();
            accumulate(&mut grads, &samples, 1.0 / batch.len() as f64);
            adam.update(&mut params, &grads);

            let hidden = config.hidden;
            for &i in batch {
                for &j in &features[i].indices {
                    grads.w1[j * hidden..(j + 1) * hidden]
                        .iter_mut()
                        .for_each(|v| *v = 0.0);
                }
            }
        }
        let mean = loss_sum / features.len() as f64;
        log_epoch(epoch + 1, config.epochs, mean);
        epoch_losses.push(mean);
    }
    if !params.is_finite() {
        return Err(Error::Training("parameters became non-finite".into()));
    }
    Ok(TrainOutcome {
        params,
        epoch_losses,
    })
}

fn log_epoch(epoch: usize, epochs: usize, loss: f64) {
    if std::env::var_os("WILI_VERBOSE").is_some() {
        eprintln!("epoch {epoch}/{epochs}: loss {loss:.5}");
    }
}

/// Index of the largest probability; ties go to the lowest index.
pub fn argmax(probs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in probs.iter().enumerate().skip(1) {
        if p > probs[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn predict_index(p: &MlpParams, x: &SparseVector) -> usize {
    argmax(&forward_sparse(p, x).probs)
}
