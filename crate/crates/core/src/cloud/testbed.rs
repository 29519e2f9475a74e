//! The default six-cloud testbed and the on-disk system configuration format.
//!
//! The testbed has two co-branded providers (different centers) for each of
//! MA (per-minute billing), AWS (per-hour), and GCP (hybrid), four VM types
//! each with capacities 2/4/8/16 compute units per second, 97 s boot time,
//! 20 Mbps internal and 100 Mbps external bandwidth.

use serde::{Deserialize, Serialize};

use crate::error::SystemError;
use crate::money::Money;
use crate::scalar::{s, Scalar};

use super::{
    BillingKind, BillingScheme, CloudProvider, MultiCloudSystem, TransferBracket, TransferPricing,
    VmTypeSpec,
};

/// Serializable mirror of [`MultiCloudSystem`]; the human-editable TOML
/// schema the CLI's `--system` flag reads.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Default external bandwidth between any two providers, Mbps.
    pub external_bandwidth_mbps: f64,
    /// Optional per-pair overrides.
    #[serde(default)]
    pub external_links: Vec<ExternalLink>,
    pub providers: Vec<ProviderConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExternalLink {
    pub from: String,
    pub to: String,
    pub bandwidth_mbps: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProviderConfig {
    pub name: String,
    pub brand: String,
    pub center: String,
    pub billing: BillingKind,
    pub internal_bandwidth_mbps: f64,
    pub vm_types: Vec<VmTypeConfig>,
    pub transfer: TransferConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VmTypeConfig {
    pub name: String,
    pub capacity: f64,
    pub boot_time_s: f64,
    /// Price per billing period, decimal dollars.
    pub rate: f64,
    /// Price of the first hybrid block, decimal dollars.
    #[serde(default)]
    pub initial_block_price: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransferConfig {
    /// Flat per-GB dollars to the co-branded provider in another center.
    pub across_centers_per_gb: f64,
    /// Ordered volume brackets for cross-brand transfers.
    pub across_clouds: Vec<BracketConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketConfig {
    /// Upper volume bound in GB; omit for the open-ended last bracket.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub up_to_gb: Option<f64>,
    pub rate_per_gb: f64,
}

impl SystemConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, SystemError> {
        toml::from_str(text).map_err(|e| SystemError::Format(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, SystemError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn build<S: Scalar>(&self) -> Result<MultiCloudSystem<S>, SystemError> {
        let providers: Vec<CloudProvider<S>> = self
            .providers
            .iter()
            .map(|p| CloudProvider {
                name: p.name.clone(),
                brand: p.brand.clone(),
                center: p.center.clone(),
                billing: BillingScheme::of_kind(p.billing),
                vm_types: p
                    .vm_types
                    .iter()
                    .map(|v| VmTypeSpec {
                        name: v.name.clone(),
                        capacity: s(v.capacity),
                        boot_time: s(v.boot_time_s),
                        rate: Money::from_dollars(v.rate),
                        initial_block_price: Money::from_dollars(v.initial_block_price),
                    })
                    .collect(),
                internal_bandwidth_mbps: s(p.internal_bandwidth_mbps),
                transfer: TransferPricing {
                    across_centers_per_gb: Money::from_dollars(p.transfer.across_centers_per_gb),
                    across_clouds: p
                        .transfer
                        .across_clouds
                        .iter()
                        .map(|b| TransferBracket {
                            up_to_gb: b.up_to_gb,
                            rate_per_gb: Money::from_dollars(b.rate_per_gb),
                        })
                        .collect(),
                },
            })
            .collect();

        let m = providers.len();
        let mut matrix = vec![s(self.external_bandwidth_mbps); m * m];
        for link in &self.external_links {
            let find = |name: &str| -> Result<usize, SystemError> {
                providers
                    .iter()
                    .position(|p| p.name == name)
                    .ok_or_else(|| {
                        SystemError::Format(format!("external link names unknown provider {name}"))
                    })
            };
            let a = find(&link.from)?;
            let b = find(&link.to)?;
            matrix[a * m + b] = s(link.bandwidth_mbps);
            matrix[b * m + a] = s(link.bandwidth_mbps);
        }
        MultiCloudSystem::new(providers, matrix)
    }
}

const BOOT_TIME_S: f64 = 97.0;
const INTERNAL_MBPS: f64 = 20.0;
const EXTERNAL_MBPS: f64 = 100.0;
const TB: f64 = 1024.0;

fn ma_provider(center: &str) -> ProviderConfig {
    let names = ["B2MS", "B4MS", "B8MS", "B16MS"];
    let rates = [0.0015, 0.003, 0.006, 0.012];
    ProviderConfig {
        name: format!("MA-{center}"),
        brand: "MA".into(),
        center: center.into(),
        billing: BillingKind::PerMinute,
        internal_bandwidth_mbps: INTERNAL_MBPS,
        vm_types: names
            .iter()
            .zip(rates)
            .enumerate()
            .map(|(i, (name, rate))| VmTypeConfig {
                name: (*name).into(),
                capacity: 2.0_f64.powi(i as i32 + 1),
                boot_time_s: BOOT_TIME_S,
                rate,
                initial_block_price: 0.0,
            })
            .collect(),
        transfer: TransferConfig {
            across_centers_per_gb: 0.08,
            across_clouds: vec![
                BracketConfig { up_to_gb: Some(100.0), rate_per_gb: 0.0 },
                BracketConfig { up_to_gb: Some(10.0 * TB), rate_per_gb: 0.11 },
                BracketConfig { up_to_gb: Some(50.0 * TB), rate_per_gb: 0.075 },
                BracketConfig { up_to_gb: Some(150.0 * TB), rate_per_gb: 0.07 },
                BracketConfig { up_to_gb: None, rate_per_gb: 0.06 },
            ],
        },
    }
}

fn aws_provider(center: &str) -> ProviderConfig {
    let names = ["m1.small", "m1.medium", "m1.large", "m1.xlarge"];
    let rates = [0.06, 0.12, 0.24, 0.45];
    ProviderConfig {
        name: format!("AWS-{center}"),
        brand: "AWS".into(),
        center: center.into(),
        billing: BillingKind::PerHour,
        internal_bandwidth_mbps: INTERNAL_MBPS,
        vm_types: names
            .iter()
            .zip(rates)
            .enumerate()
            .map(|(i, (name, rate))| VmTypeConfig {
                name: (*name).into(),
                capacity: 2.0_f64.powi(i as i32 + 1),
                boot_time_s: BOOT_TIME_S,
                rate,
                initial_block_price: 0.0,
            })
            .collect(),
        transfer: TransferConfig {
            across_centers_per_gb: 0.02,
            across_clouds: vec![
                BracketConfig { up_to_gb: Some(100.0), rate_per_gb: 0.0 },
                BracketConfig { up_to_gb: Some(10.0 * TB), rate_per_gb: 0.09 },
                BracketConfig { up_to_gb: Some(50.0 * TB), rate_per_gb: 0.085 },
                BracketConfig { up_to_gb: Some(150.0 * TB), rate_per_gb: 0.07 },
                BracketConfig { up_to_gb: None, rate_per_gb: 0.05 },
            ],
        },
    }
}

fn gcp_provider(center: &str) -> ProviderConfig {
    let names = [
        "n1-highcpu-2",
        "n1-highcpu-4",
        "n1-highcpu-8",
        "n1-highcpu-16",
    ];
    let rates = [0.0012, 0.0023, 0.0047, 0.0093];
    let blocks = [0.014, 0.025, 0.05, 0.1];
    ProviderConfig {
        name: format!("GCP-{center}"),
        brand: "GCP".into(),
        center: center.into(),
        billing: BillingKind::HybridTenMinute,
        internal_bandwidth_mbps: INTERNAL_MBPS,
        vm_types: names
            .iter()
            .zip(rates.iter().zip(blocks))
            .enumerate()
            .map(|(i, (name, (rate, block)))| VmTypeConfig {
                name: (*name).into(),
                capacity: 2.0_f64.powi(i as i32 + 1),
                boot_time_s: BOOT_TIME_S,
                rate: *rate,
                initial_block_price: block,
            })
            .collect(),
        transfer: TransferConfig {
            across_centers_per_gb: 0.05,
            across_clouds: vec![
                BracketConfig { up_to_gb: Some(TB), rate_per_gb: 0.19 },
                BracketConfig { up_to_gb: Some(10.0 * TB), rate_per_gb: 0.18 },
                BracketConfig { up_to_gb: None, rate_per_gb: 0.15 },
            ],
        },
    }
}

/// Configuration of the default testbed.
pub fn default_testbed_config() -> SystemConfig {
    SystemConfig {
        external_bandwidth_mbps: EXTERNAL_MBPS,
        external_links: vec![],
        providers: vec![
            ma_provider("east"),
            ma_provider("west"),
            aws_provider("east"),
            aws_provider("west"),
            gcp_provider("east"),
            gcp_provider("west"),
        ],
    }
}

/// The default six-cloud testbed.
pub fn default_testbed<S: Scalar>() -> MultiCloudSystem<S> {
    default_testbed_config()
        .build()
        .expect("default testbed is valid")
}
