//! Multi-cloud system model: providers, VM types, network bandwidths, and
//! the three pricing mechanisms (lease billing, per-GB transfer rates).

mod testbed;

pub use testbed::{
    default_testbed, default_testbed_config, BracketConfig, ExternalLink, ProviderConfig,
    SystemConfig, TransferConfig, VmTypeConfig,
};

use crate::error::SystemError;
use crate::money::Money;
use crate::scalar::{s, Scalar};
use crate::workflow::Task;

/// Megabits per GB; binary GB, stated once and used everywhere.
pub const MEGABITS_PER_GB: f64 = 8192.0;

/// How a provider bills VM leases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BillingKind {
    /// Charged per started minute.
    PerMinute,
    /// Charged per started hour.
    PerHour,
    /// A flat price covers the first ten minutes, then per-minute billing.
    HybridTenMinute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BillingScheme {
    pub kind: BillingKind,
    /// Billing period in seconds.
    pub period_s: u64,
    /// Minimum charged block in seconds (0 unless hybrid).
    pub minimum_block_s: u64,
}

impl BillingScheme {
    pub fn per_minute() -> Self {
        BillingScheme {
            kind: BillingKind::PerMinute,
            period_s: 60,
            minimum_block_s: 0,
        }
    }

    pub fn per_hour() -> Self {
        BillingScheme {
            kind: BillingKind::PerHour,
            period_s: 3600,
            minimum_block_s: 0,
        }
    }

    pub fn hybrid_ten_minute() -> Self {
        BillingScheme {
            kind: BillingKind::HybridTenMinute,
            period_s: 60,
            minimum_block_s: 600,
        }
    }

    pub fn of_kind(kind: BillingKind) -> Self {
        match kind {
            BillingKind::PerMinute => Self::per_minute(),
            BillingKind::PerHour => Self::per_hour(),
            BillingKind::HybridTenMinute => Self::hybrid_ten_minute(),
        }
    }
}

/// One VM offering of a provider.
#[derive(Clone, Debug)]
pub struct VmTypeSpec<S> {
    pub name: String,
    /// Compute units per second; higher is faster.
    pub capacity: S,
    /// Boot delay in seconds before the first task can start.
    pub boot_time: S,
    /// Price per billing period.
    pub rate: Money,
    /// Price of the first hybrid block; zero unless the provider bills hybrid.
    pub initial_block_price: Money,
}

/// One per-GB rate applying to transfer volumes up to `up_to_gb`
/// (open-ended when `None`).
#[derive(Clone, Copy, Debug)]
pub struct TransferBracket {
    pub up_to_gb: Option<f64>,
    pub rate_per_gb: Money,
}

/// Outbound data pricing of one provider (the sender's schedule governs).
#[derive(Clone, Debug)]
pub struct TransferPricing {
    /// Flat per-GB rate to the co-branded provider in another center.
    pub across_centers_per_gb: Money,
    /// Volume brackets for transfers to a different cloud brand. The whole
    /// volume is charged at the rate of the single bracket containing it.
    pub across_clouds: Vec<TransferBracket>,
}

#[derive(Clone, Debug)]
pub struct CloudProvider<S> {
    pub name: String,
    /// Brand label; co-branded providers in different centers share it.
    pub brand: String,
    /// Center label distinguishing co-branded providers.
    pub center: String,
    pub billing: BillingScheme,
    pub vm_types: Vec<VmTypeSpec<S>>,
    /// Bandwidth between instances inside this cloud, Mbps.
    pub internal_bandwidth_mbps: S,
    pub transfer: TransferPricing,
}

/// Where two communicating tasks sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    SameInstance,
    /// Different instances inside provider `k`.
    SameCloud(usize),
    /// Sender on provider `k`, receiver on provider `k'`.
    CrossCloud(usize, usize),
}

/// The full provider catalog plus the inter-cloud bandwidth matrix.
#[derive(Clone, Debug)]
pub struct MultiCloudSystem<S> {
    providers: Vec<CloudProvider<S>>,
    /// Row-major m x m matrix of external bandwidths, Mbps; diagonal unused.
    external_bandwidth_mbps: Vec<S>,
}

impl<S: Scalar> MultiCloudSystem<S> {
    /// Builds a system with one uniform external bandwidth for every provider
    /// pair.
    pub fn new_uniform_external(
        providers: Vec<CloudProvider<S>>,
        external_bandwidth_mbps: S,
    ) -> Result<Self, SystemError> {
        let m = providers.len();
        Self::new(providers, vec![external_bandwidth_mbps; m * m])
    }

    pub fn new(
        providers: Vec<CloudProvider<S>>,
        external_bandwidth_mbps: Vec<S>,
    ) -> Result<Self, SystemError> {
        let m = providers.len();
        if m == 0 {
            return Err(SystemError::Validation("no providers".into()));
        }
        if external_bandwidth_mbps.len() != m * m {
            return Err(SystemError::Validation(format!(
                "external bandwidth matrix must be {m}x{m}"
            )));
        }
        for p in &providers {
            if p.vm_types.is_empty() {
                return Err(SystemError::Validation(format!(
                    "provider {} offers no VM types",
                    p.name
                )));
            }
            if p.internal_bandwidth_mbps <= S::zero() {
                return Err(SystemError::Validation(format!(
                    "provider {}: internal bandwidth must be positive",
                    p.name
                )));
            }
            for vm in &p.vm_types {
                if vm.capacity <= S::zero() {
                    return Err(SystemError::Validation(format!(
                        "VM type {}: capacity must be positive",
                        vm.name
                    )));
                }
                if vm.boot_time < S::zero()
                    || vm.rate < Money::ZERO
                    || vm.initial_block_price < Money::ZERO
                {
                    return Err(SystemError::Validation(format!(
                        "VM type {}: negative boot time or price",
                        vm.name
                    )));
                }
            }
            let mut prev = 0.0_f64;
            for (i, b) in p.transfer.across_clouds.iter().enumerate() {
                if b.rate_per_gb < Money::ZERO {
                    return Err(SystemError::Validation(format!(
                        "provider {}: negative transfer rate",
                        p.name
                    )));
                }
                match b.up_to_gb {
                    Some(hi) => {
                        if hi <= prev {
                            return Err(SystemError::Validation(format!(
                                "provider {}: bracket boundaries must strictly increase",
                                p.name
                            )));
                        }
                        prev = hi;
                    }
                    None => {
                        if i + 1 != p.transfer.across_clouds.len() {
                            return Err(SystemError::Validation(format!(
                                "provider {}: only the last bracket may be open-ended",
                                p.name
                            )));
                        }
                    }
                }
            }
        }
        for (i, &b) in external_bandwidth_mbps.iter().enumerate() {
            if b <= S::zero() && i / m != i % m {
                return Err(SystemError::Validation(
                    "external bandwidths must be positive".into(),
                ));
            }
        }
        Ok(MultiCloudSystem {
            providers,
            external_bandwidth_mbps,
        })
    }

    pub fn providers(&self) -> &[CloudProvider<S>] {
        &self.providers
    }

    pub fn provider(&self, k: usize) -> Result<&CloudProvider<S>, SystemError> {
        self.providers.get(k).ok_or(SystemError::UnknownProvider(k))
    }

    /// Total number of VM types across all providers.
    pub fn vm_type_count(&self) -> usize {
        self.providers.iter().map(|p| p.vm_types.len()).sum()
    }

    /// Global (provider-major, type-minor) flat index of a VM type.
    pub fn flat_type_index(&self, provider: usize, vm_type: usize) -> usize {
        self.providers[..provider]
            .iter()
            .map(|p| p.vm_types.len())
            .sum::<usize>()
            + vm_type
    }

    /// Iterates `(provider, type)` index pairs in flat order.
    pub fn vm_types(&self) -> impl Iterator<Item = (usize, usize, &VmTypeSpec<S>)> {
        self.providers
            .iter()
            .enumerate()
            .flat_map(|(k, p)| p.vm_types.iter().enumerate().map(move |(t, vm)| (k, t, vm)))
    }

    pub fn external_bandwidth(&self, k: usize, k2: usize) -> S {
        self.external_bandwidth_mbps[k * self.providers.len() + k2]
    }

    /// Communication time in seconds for `volume_gb` between two placements.
    pub fn comm_time(&self, volume_gb: S, placement: Placement) -> Result<S, SystemError> {
        let megabits = volume_gb * s::<S>(MEGABITS_PER_GB);
        match placement {
            Placement::SameInstance => Ok(S::zero()),
            Placement::SameCloud(k) => Ok(megabits / self.provider(k)?.internal_bandwidth_mbps),
            Placement::CrossCloud(k, k2) => {
                self.provider(k)?;
                self.provider(k2)?;
                Ok(megabits / self.external_bandwidth(k, k2))
            }
        }
    }

    /// Price of sending `volume_gb` from provider `from` to provider `to`,
    /// under the sender's schedule: free inside one center, the flat
    /// across-centers rate between co-branded providers, and otherwise the
    /// rate of the single bracket containing the volume applied to the whole
    /// volume.
    pub fn transfer_cost(&self, volume_gb: S, from: usize, to: usize) -> Result<Money, SystemError> {
        let sender = self.provider(from)?;
        let receiver = self.provider(to)?;
        if from == to {
            return Ok(Money::ZERO);
        }
        let vol = volume_gb.to_f64().unwrap_or(0.0);
        if vol <= 0.0 {
            return Ok(Money::ZERO);
        }
        if sender.brand == receiver.brand {
            return Ok(sender.transfer.across_centers_per_gb.per_gb(vol));
        }
        for bracket in &sender.transfer.across_clouds {
            match bracket.up_to_gb {
                Some(hi) if vol > hi => continue,
                _ => return Ok(bracket.rate_per_gb.per_gb(vol)),
            }
        }
        // Volume beyond the last closed bracket: charge the last rate.
        let last = sender
            .transfer
            .across_clouds
            .last()
            .ok_or_else(|| SystemError::Validation("no transfer brackets".into()))?;
        Ok(last.rate_per_gb.per_gb(vol))
    }
}

/// Seconds to run `task` on a VM of type `vm`.
pub fn exec_time<S: Scalar>(task: &Task<S>, vm: &VmTypeSpec<S>) -> S {
    task.weight / vm.capacity
}

/// Lease price for holding one instance of `vm` for `duration_s` seconds
/// under `billing`. Per-minute and per-hour schemes charge every started
/// period; the hybrid scheme charges the initial block plus every started
/// minute past the first ten.
pub fn lease_cost<S: Scalar>(duration_s: S, vm: &VmTypeSpec<S>, billing: &BillingScheme) -> Money {
    assert!(
        duration_s >= S::zero(),
        "lease duration must be non-negative"
    );
    let period = s::<S>(billing.period_s as f64);
    match billing.kind {
        BillingKind::PerMinute | BillingKind::PerHour => {
            let periods = (duration_s / period).ceil().to_u64().unwrap_or(0);
            vm.rate.per_periods(periods)
        }
        BillingKind::HybridTenMinute => {
            let past_block = duration_s - s::<S>(billing.minimum_block_s as f64);
            let extra = (past_block / period).ceil().to_i64().unwrap_or(0).max(0);
            vm.initial_block_price + vm.rate.per_periods(extra as u64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workflow::Task;

    fn vm(rate: f64, block: f64) -> VmTypeSpec<f64> {
        VmTypeSpec {
            name: "t".into(),
            capacity: 1.0,
            boot_time: 97.0,
            rate: Money::from_dollars(rate),
            initial_block_price: Money::from_dollars(block),
        }
    }

    #[test]
    fn exec_time_divides_weight_by_capacity() {
        let t = |w: f64| Task { weight: w, label: None };
        let mut v = vm(0.0, 0.0);
        v.capacity = 1.0;
        assert_eq!(exec_time(&t(50.0), &v), 50.0);
        v.capacity = 4.0;
        assert_eq!(exec_time(&t(100.0), &v), 25.0);
        assert_eq!(exec_time(&t(0.0), &v), 0.0);
    }

    #[test]
    fn per_minute_lease_rounds_up_periods() {
        let b2ms = vm(0.0015, 0.0);
        let billing = BillingScheme::per_minute();
        assert_eq!(lease_cost(61.0, &b2ms, &billing), Money::from_dollars(0.003));
        assert_eq!(lease_cost(60.0, &b2ms, &billing), Money::from_dollars(0.0015));
        assert_eq!(lease_cost(0.0, &b2ms, &billing), Money::ZERO);
    }

    #[test]
    fn per_hour_lease_rounds_up_periods() {
        let small = vm(0.06, 0.0);
        let billing = BillingScheme::per_hour();
        assert_eq!(lease_cost(3600.0, &small, &billing), Money::from_dollars(0.06));
        assert_eq!(lease_cost(3601.0, &small, &billing), Money::from_dollars(0.12));
    }

    #[test]
    fn hybrid_lease_charges_block_then_minutes() {
        let n1 = vm(0.0012, 0.014);
        let billing = BillingScheme::hybrid_ten_minute();
        assert_eq!(lease_cost(300.0, &n1, &billing), Money::from_dollars(0.014));
        assert_eq!(lease_cost(600.0, &n1, &billing), Money::from_dollars(0.014));
        assert_eq!(lease_cost(720.0, &n1, &billing), Money::from_dollars(0.0164));
    }

    #[test]
    fn comm_time_follows_placement() {
        let sys: MultiCloudSystem<f64> = default_testbed();
        // Same instance is free regardless of volume.
        assert_eq!(sys.comm_time(123.0, Placement::SameInstance).unwrap(), 0.0);
        // 100 megabits inside a 20 Mbps cloud.
        let vol = 100.0 / MEGABITS_PER_GB;
        assert_eq!(sys.comm_time(vol, Placement::SameCloud(0)).unwrap(), 5.0);
        // 100 megabits across 100 Mbps external links.
        assert_eq!(
            sys.comm_time(vol, Placement::CrossCloud(0, 2)).unwrap(),
            1.0
        );
        assert!(sys.comm_time(1.0, Placement::SameCloud(99)).is_err());
    }

    #[test]
    fn comm_time_scales_linearly_in_volume() {
        let sys: MultiCloudSystem<f64> = default_testbed();
        let base = sys.comm_time(1.0, Placement::SameCloud(1)).unwrap();
        for k in 2..10 {
            let t = sys.comm_time(k as f64, Placement::SameCloud(1)).unwrap();
            assert!((t - base * k as f64).abs() < 1e-9);
        }
    }
}
