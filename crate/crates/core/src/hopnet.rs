//! A chain of sensor nodes relaying one message to a cluster head.
//!
//! Every intermediate node really decrypts with the key it shares with its
//! upstream neighbour and re-encrypts with the key it shares downstream.
//! Delay is accounted per hop as `t_enc + t_tx + t_dec + dt`.
//!
//! Two totals are offered. `Linear` (the default) is `n * T_hop`; with the
//! default parameters it gives 27,450 ms at 30 hops, 164,700 ms at 180 and
//! 59,964,525 ms at 65,535. `Summation` is `sum_{i=1..n} i * T_hop`.
//!
//! Pairwise keys are derived from a run seed and the two node ids. Beacon and
//! association exchanges are treated as free chain-construction steps.
//! Network size does not enter the model: delay depends on hop count alone.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::aes::{Block, CipherKey};
use crate::cbc::{CbcContext, Message};
use crate::error::{Error, Result};

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    /// Pre-deployed pairwise keys, by neighbour id.
    pub keys: BTreeMap<NodeId, CipherKey>,
}

impl Node {
    pub fn new(id: NodeId) -> Self {
        Self {
            id,
            keys: BTreeMap::new(),
        }
    }
}

/// Deterministic AES-128 key for the unordered pair `{a, b}`.
pub fn pairwise_key(seed: u64, a: NodeId, b: NodeId) -> CipherKey {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let digest = derive(b"pairwise-key", seed, lo, hi);
    CipherKey::new(&digest[..16]).expect("16-octet key")
}

/// IV used on the directed link `from -> to`.
pub fn link_iv(seed: u64, from: NodeId, to: NodeId) -> Block {
    let digest = derive(b"link-iv", seed, from, to);
    digest[..16].try_into().expect("16-octet iv")
}

fn derive(label: &[u8], seed: u64, a: NodeId, b: NodeId) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(label);
    h.update(seed.to_be_bytes());
    h.update(a.to_be_bytes());
    h.update(b.to_be_bytes());
    h.finalize().into()
}

/// Nodes `N_1 .. N_n` followed by the cluster head; `n` hops in total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopChain {
    nodes: Vec<Node>,
    seed: u64,
}

impl HopChain {
    /// Builds an `hops`-hop chain with ids `0..=hops`, the last one being the cluster head.
    pub fn generate(hops: usize, seed: u64) -> Result<Self> {
        if hops == 0 {
            return Err(Error::HopCount);
        }
        let mut nodes: Vec<Node> = (0..=hops as NodeId).map(Node::new).collect();
        for i in 0..hops {
            let (a, b) = (nodes[i].id, nodes[i + 1].id);
            let key = pairwise_key(seed, a, b);
            nodes[i].keys.insert(b, key.clone());
            nodes[i + 1].keys.insert(a, key);
        }
        Self::from_nodes(nodes, seed)
    }

    /// Checks that consecutive nodes hold the same key for each other.
    pub fn from_nodes(nodes: Vec<Node>, seed: u64) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::HopCount);
        }
        for pair in nodes.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            match (a.keys.get(&b.id), b.keys.get(&a.id)) {
                (Some(ka), Some(kb)) if ka == kb => {}
                (Some(_), Some(_)) => {
                    return Err(Error::Topology(format!(
                        "nodes {} and {} hold different keys for their link",
                        a.id, b.id
                    )))
                }
                _ => {
                    return Err(Error::Topology(format!(
                        "no pairwise key between nodes {} and {}",
                        a.id, b.id
                    )))
                }
            }
        }
        Ok(Self { nodes, seed })
    }

    pub fn hops(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<Node> {
        self.nodes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn cluster_head(&self) -> &Node {
        self.nodes.last().expect("at least two nodes")
    }

    fn link(&self, hop: usize) -> CbcContext {
        let (a, b) = (&self.nodes[hop], &self.nodes[hop + 1]);
        CbcContext::from_key(&a.keys[&b.id], link_iv(self.seed, a.id, b.id))
    }
}

/// Per-hop delay components, milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayParams {
    pub t_enc: f64,
    pub t_dec: f64,
    pub t_tx: f64,
    pub delta_t: f64,
}

impl Default for DelayParams {
    /// 16-octet message on the 20 MHz device, no channel-access delay.
    fn default() -> Self {
        Self {
            t_enc: 449.0,
            t_dec: 456.0,
            t_tx: 10.0,
            delta_t: 0.0,
        }
    }
}

impl DelayParams {
    pub fn new(t_enc: f64, t_dec: f64, t_tx: f64, delta_t: f64) -> Result<Self> {
        let p = Self {
            t_enc,
            t_dec,
            t_tx,
            delta_t,
        };
        p.validate()?;
        Ok(p)
    }

    /// All terms finite and non-negative; `delta_t` bounded by the other three.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("t_enc", self.t_enc),
            ("t_dec", self.t_dec),
            ("t_tx", self.t_tx),
            ("delta_t", self.delta_t),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::DelayParams(format!(
                    "{name} = {v} must be a finite value >= 0"
                )));
            }
        }
        let rest = self.t_enc + self.t_tx + self.t_dec;
        if self.delta_t > rest {
            return Err(Error::DelayParams(format!(
                "delta_t = {} exceeds t_enc + t_tx + t_dec = {rest}",
                self.delta_t
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpretation {
    #[default]
    Linear,
    Summation,
}

pub fn hop_delay(params: &DelayParams) -> f64 {
    params.t_enc + params.t_tx + params.t_dec + params.delta_t
}

pub fn total_delay(params: &DelayParams, hops: u64, interpretation: Interpretation) -> Result<f64> {
    if hops == 0 {
        return Err(Error::HopCount);
    }
    let t = hop_delay(params);
    let n = hops as f64;
    Ok(match interpretation {
        Interpretation::Linear => n * t,
        Interpretation::Summation => n * (n + 1.0) / 2.0 * t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub hops: u64,
    pub total_delay_ms: f64,
}

/// Total delay for every hop count from 1 to `max_hops`.
pub fn sweep(params: &DelayParams, max_hops: u64, interpretation: Interpretation) -> Vec<SweepRow> {
    (1..=max_hops)
        .map(|hops| SweepRow {
            hops,
            total_delay_ms: total_delay(params, hops, interpretation).expect("hops >= 1"),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopRecord {
    /// 1-based hop index.
    pub hop: usize,
    pub from: NodeId,
    pub to: NodeId,
    /// First 8 octets of SHA-256 over the ciphertext sent on this hop.
    pub msg_digest: String,
    pub delay_ms: f64,
    pub cumulative_linear_ms: f64,
    pub cumulative_summation_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub hops: usize,
    pub payload_size: usize,
    pub seed: u64,
    pub params: DelayParams,
    pub ledger: Vec<HopRecord>,
    pub total_linear_ms: f64,
    pub total_summation_ms: f64,
    pub plaintext_intact: bool,
}

impl SimReport {
    pub fn total(&self, interpretation: Interpretation) -> f64 {
        match interpretation {
            Interpretation::Linear => self.total_linear_ms,
            Interpretation::Summation => self.total_summation_ms,
        }
    }
}

/// Pseudo-random payload, fixed by `seed`.
pub fn seeded_payload(size: usize, seed: u64) -> Vec<u8> {
    let mut buf = vec![0u8; size];
    ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut buf);
    buf
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

/// Sends `plaintext` from the first node to the cluster head.
pub fn relay_message(
    chain: &HopChain,
    plaintext: &Message,
    params: &DelayParams,
) -> Result<SimReport> {
    params.validate()?;
    // Revalidate before touching any data so a bad link never yields partial delivery.
    let chain = HopChain::from_nodes(chain.nodes.clone(), chain.seed)?;
    let hops = chain.hops();
    let t = hop_delay(params);

    let mut ledger = Vec::with_capacity(hops);
    let mut in_flight = chain.link(0).encrypt(plaintext)?;
    let mut linear = 0.0;
    let mut summation = 0.0;
    for hop in 0..hops {
        linear += t;
        summation += (hop + 1) as f64 * t;
        ledger.push(HopRecord {
            hop: hop + 1,
            from: chain.nodes[hop].id,
            to: chain.nodes[hop + 1].id,
            msg_digest: digest(&in_flight),
            delay_ms: t,
            cumulative_linear_ms: linear,
            cumulative_summation_ms: summation,
        });

        let recovered = chain.link(hop).decrypt(&in_flight, plaintext.padding)?;
        if hop + 1 < hops {
            in_flight = chain.link(hop + 1).encrypt(&recovered)?;
        } else if recovered.octets != plaintext.octets {
            return Err(Error::Integrity { hops });
        }
    }

    Ok(SimReport {
        hops,
        payload_size: plaintext.octets.len(),
        seed: chain.seed,
        params: *params,
        ledger,
        total_linear_ms: linear,
        total_summation_ms: summation,
        plaintext_intact: true,
    })
}
