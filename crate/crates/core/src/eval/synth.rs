//! Seeded synthetic scenario generator with known ground truth.
//!
//! Scenarios place non-overlapping rectangular GOIs, schedule visits to them,
//! and emit a sampled trajectory: a bounded random walk inside the GOI during
//! each dwell, straight-line travel between GOIs, optional sampling gaps, and
//! i.i.d. Gaussian noise per fix. Everything is driven by ChaCha8 streams
//! (one per scenario component), so a seed fixes the output bit-for-bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{unproject, BoundingBox, LatLon, PlanarPoint, Region};
use crate::trajectory::{ingest, RawFix, Trajectory};

use super::GroundTruth;

/// Generator parameters. Ranges are inclusive of both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub goi_count: usize,
    /// GOI rectangle edge lengths, meters.
    pub goi_size_min: f64,
    pub goi_size_max: f64,
    pub visits_per_goi: usize,
    /// Dwell duration per visit, seconds. Keep at or above the extraction
    /// `t_min` for recoverable stays.
    pub dwell_min_s: i64,
    pub dwell_max_s: i64,
    pub travel_speed_mps: f64,
    pub sample_interval_s: i64,
    /// Chance, per emitted sample, of a sampling gap following it.
    pub gap_probability: f64,
    pub gap_min_s: i64,
    pub gap_max_s: i64,
    /// Standard deviation of the per-fix Gaussian position noise, meters.
    pub noise_sigma_m: f64,
    pub seed: u64,
    /// Minimum edge-to-edge distance between placed GOIs, meters.
    pub min_separation_m: f64,
    /// Projection origin the trajectory is expressed against.
    pub origin_lat: f64,
    pub origin_lon: f64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            goi_count: 4,
            goi_size_min: 50.0,
            goi_size_max: 150.0,
            visits_per_goi: 8,
            dwell_min_s: 7200,
            dwell_max_s: 10800,
            travel_speed_mps: 15.0,
            sample_interval_s: 30,
            gap_probability: 0.0,
            gap_min_s: 3600,
            gap_max_s: 10800,
            noise_sigma_m: 10.0,
            seed: 0,
            min_separation_m: 400.0,
            origin_lat: 0.0,
            origin_lon: 0.0,
        }
    }
}

impl ScenarioSpec {
    pub fn origin(&self) -> LatLon {
        LatLon::new(self.origin_lat, self.origin_lon)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, message: &str| {
            Err(Error::InvalidParameter {
                name,
                message: message.into(),
            })
        };
        if self.goi_count == 0 {
            return bad("goi_count", "must be >= 1");
        }
        if !(self.goi_size_min > 0.0 && self.goi_size_max >= self.goi_size_min) {
            return bad("goi_size", "need 0 < min <= max");
        }
        if self.visits_per_goi == 0 {
            return bad("visits_per_goi", "must be >= 1");
        }
        if !(self.dwell_min_s > 0 && self.dwell_max_s >= self.dwell_min_s) {
            return bad("dwell", "need 0 < min <= max");
        }
        if self.travel_speed_mps <= 0.0 {
            return bad("travel_speed_mps", "must be strictly positive");
        }
        if self.sample_interval_s < 1 {
            return bad("sample_interval_s", "must be >= 1");
        }
        if !(0.0..=1.0).contains(&self.gap_probability) {
            return bad("gap_probability", "must lie in [0, 1]");
        }
        if !(self.gap_min_s > 0 && self.gap_max_s >= self.gap_min_s) {
            return bad("gap", "need 0 < min <= max");
        }
        if self.noise_sigma_m < 0.0 {
            return bad("noise_sigma_m", "must be >= 0");
        }
        if self.min_separation_m <= 0.0 {
            return bad("min_separation_m", "must be strictly positive");
        }
        Ok(())
    }

    /// Parses a flat `key = value` config (`#` starts a comment). Unknown
    /// keys are rejected; missing keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected `key = value`, found `{line}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            spec.set(key, value).map_err(|message| Error::Parse {
                line: lineno + 1,
                message,
            })?;
        }
        spec.validate()?;
        Ok(spec)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn p<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("cannot parse `{v}`"))
        }
        match key {
            "goi_count" => self.goi_count = p(value)?,
            "goi_size_min" => self.goi_size_min = p(value)?,
            "goi_size_max" => self.goi_size_max = p(value)?,
            "visits_per_goi" => self.visits_per_goi = p(value)?,
            "dwell_min_s" => self.dwell_min_s = p(value)?,
            "dwell_max_s" => self.dwell_max_s = p(value)?,
            "travel_speed_mps" => self.travel_speed_mps = p(value)?,
            "sample_interval_s" => self.sample_interval_s = p(value)?,
            "gap_probability" => self.gap_probability = p(value)?,
            "gap_min_s" => self.gap_min_s = p(value)?,
            "gap_max_s" => self.gap_max_s = p(value)?,
            "noise_sigma_m" => self.noise_sigma_m = p(value)?,
            "seed" => self.seed = p(value)?,
            "min_separation_m" => self.min_separation_m = p(value)?,
            "origin_lat" => self.origin_lat = p(value)?,
            "origin_lon" => self.origin_lon = p(value)?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// The flat key=value rendering accepted by [`ScenarioSpec::parse`].
    pub fn to_config_string(&self) -> String {
        format!(
            "goi_count = {}\ngoi_size_min = {}\ngoi_size_max = {}\nvisits_per_goi = {}\n\
             dwell_min_s = {}\ndwell_max_s = {}\ntravel_speed_mps = {}\nsample_interval_s = {}\n\
             gap_probability = {}\ngap_min_s = {}\ngap_max_s = {}\nnoise_sigma_m = {}\n\
             seed = {}\nmin_separation_m = {}\norigin_lat = {}\norigin_lon = {}\n",
            self.goi_count,
            self.goi_size_min,
            self.goi_size_max,
            self.visits_per_goi,
            self.dwell_min_s,
            self.dwell_max_s,
            self.travel_speed_mps,
            self.sample_interval_s,
            self.gap_probability,
            self.gap_min_s,
            self.gap_max_s,
            self.noise_sigma_m,
            self.seed,
            self.min_separation_m,
            self.origin_lat,
            self.origin_lon
        )
    }
}

/// One scheduled visit, ground truth for stay-level assertions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisitRecord {
    pub goi: u64,
    pub arrive: i64,
    pub depart: i64,
}

/// A generated scenario: the sampled trajectory plus everything the
/// generator knows about it.
pub struct Scenario {
    pub trajectory: Trajectory,
    pub truth: GroundTruth,
    pub visits: Vec<VisitRecord>,
}

// RNG stream ids, one per scenario component.
const STREAM_PLACEMENT: u64 = 0;
const STREAM_SCHEDULE: u64 = 1;
const STREAM_WALK: u64 = 2;
const STREAM_GAPS: u64 = 3;
const STREAM_NOISE: u64 = 4;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Generates a scenario deterministically from `spec.seed`.
pub fn generate_scenario(spec: &ScenarioSpec) -> Result<Scenario> {
    spec.validate()?;
    let gois = place_gois(spec)?;
    let truth = GroundTruth::new(
        gois.iter()
            .enumerate()
            .map(|(i, bb)| (i as u64, Region::rect(bb)))
            .collect(),
    )?;

    let mut schedule_rng = stream(spec.seed, STREAM_SCHEDULE);
    let mut walk_rng = stream(spec.seed, STREAM_WALK);
    let mut gap_rng = stream(spec.seed, STREAM_GAPS);
    let mut noise_rng = stream(spec.seed, STREAM_NOISE);
    let noise = if spec.noise_sigma_m > 0.0 {
        Some(Normal::new(0.0, spec.noise_sigma_m).expect("sigma validated"))
    } else {
        None
    };

    let mut fixes: Vec<RawFix> = Vec::new();
    let mut visits: Vec<VisitRecord> = Vec::new();
    let mut t: i64 = 0;
    let origin = spec.origin();

    let mut emit = |t: i64, pos: PlanarPoint, noise_rng: &mut ChaCha8Rng| -> Result<()> {
        let (nx, ny) = match &noise {
            Some(n) => (n.sample(noise_rng), n.sample(noise_rng)),
            None => (0.0, 0.0),
        };
        let ll = unproject(PlanarPoint::new(pos.x + nx, pos.y + ny), origin)?;
        fixes.push(RawFix {
            t,
            lat: ll.lat,
            lon: ll.lon,
        });
        Ok(())
    };

    // Round-robin visit order: every GOI once per round.
    let mut pos = gois[0].center();
    for round in 0..spec.visits_per_goi {
        for (gi, goi) in gois.iter().enumerate() {
            // Travel to the GOI (skipped when already there, e.g. at start).
            let target = goi.center();
            t = travel(
                t,
                &mut pos,
                target,
                spec,
                &mut emit,
                &mut gap_rng,
                &mut noise_rng,
            )?;

            // Dwell: bounded random walk inside the GOI.
            let dwell = schedule_rng.random_range(spec.dwell_min_s..=spec.dwell_max_s);
            let arrive = t;
            let end = t + dwell;
            let inset = (goi.width().min(goi.height()) * 0.1).min(5.0);
            while t < end {
                emit(t, pos, &mut noise_rng)?;
                t += spec.sample_interval_s;
                if spec.gap_probability > 0.0
                    && gap_rng.random_range(0.0..1.0) < spec.gap_probability
                {
                    t += gap_rng.random_range(spec.gap_min_s..=spec.gap_max_s);
                }
                let step = spec.travel_speed_mps.min(2.0) * spec.sample_interval_s as f64;
                pos = PlanarPoint::new(
                    (pos.x + walk_rng.random_range(-step..=step))
                        .clamp(goi.min_x + inset, goi.max_x - inset),
                    (pos.y + walk_rng.random_range(-step..=step))
                        .clamp(goi.min_y + inset, goi.max_y - inset),
                );
            }
            visits.push(VisitRecord {
                goi: gi as u64,
                arrive,
                depart: t,
            });
            let _ = round;
        }
    }

    // Exit leg: leave the last GOI so its final stay has a breakout point.
    let arena =
        BoundingBox::from_points(gois.iter().map(|g| g.center())).expect("at least one GOI");
    let exit = PlanarPoint::new(
        arena.max_x + spec.min_separation_m,
        arena.max_y + spec.min_separation_m,
    );
    t = travel(
        t,
        &mut pos,
        exit,
        spec,
        &mut emit,
        &mut gap_rng,
        &mut noise_rng,
    )?;
    emit(t, pos, &mut noise_rng)?;

    let trajectory = ingest(&fixes, Some(origin))?;
    Ok(Scenario {
        trajectory,
        truth,
        visits,
    })
}

/// Straight-line travel at the configured speed. Emits fixes strictly
/// between the endpoints (the departure position is already covered by the
/// last dwell fix, the arrival by the next one); a leg shorter than one
/// sampling step therefore emits nothing. Gaps advance both the clock and
/// the position.
#[allow(clippy::too_many_arguments)]
fn travel(
    mut t: i64,
    pos: &mut PlanarPoint,
    target: PlanarPoint,
    spec: &ScenarioSpec,
    emit: &mut impl FnMut(i64, PlanarPoint, &mut ChaCha8Rng) -> Result<()>,
    gap_rng: &mut ChaCha8Rng,
    noise_rng: &mut ChaCha8Rng,
) -> Result<i64> {
    while pos.distance(target) > 1e-9 {
        let mut elapsed = spec.sample_interval_s;
        if spec.gap_probability > 0.0 && gap_rng.random_range(0.0..1.0) < spec.gap_probability {
            elapsed += gap_rng.random_range(spec.gap_min_s..=spec.gap_max_s);
        }
        t += elapsed;
        let reach = spec.travel_speed_mps * elapsed as f64;
        let dist = pos.distance(target);
        if reach >= dist {
            *pos = target;
        } else {
            let f = reach / dist;
            *pos = PlanarPoint::new(
                pos.x + (target.x - pos.x) * f,
                pos.y + (target.y - pos.y) * f,
            );
            emit(t, *pos, noise_rng)?;
        }
    }
    Ok(t)
}

/// Rejection-samples non-overlapping GOI rectangles in a square arena sized
/// to hold them comfortably.
fn place_gois(spec: &ScenarioSpec) -> Result<Vec<BoundingBox>> {
    let mut rng = stream(spec.seed, STREAM_PLACEMENT);
    let per_row = (spec.goi_count as f64).sqrt().ceil();
    let pitch = spec.goi_size_max + spec.min_separation_m;
    let half = (per_row * pitch * 0.9).max(pitch);
    let max_attempts = 1000 * spec.goi_count;

    let mut placed: Vec<BoundingBox> = Vec::new();
    let mut attempts = 0usize;
    while placed.len() < spec.goi_count {
        if attempts >= max_attempts {
            return Err(Error::InfeasiblePlacement { attempts });
        }
        attempts += 1;
        let w = rng.random_range(spec.goi_size_min..=spec.goi_size_max);
        let h = rng.random_range(spec.goi_size_min..=spec.goi_size_max);
        let x = rng.random_range(-half..=half - w);
        let y = rng.random_range(-half..=half - h);
        let candidate = BoundingBox::new(x, y, x + w, y + h);
        let padded = BoundingBox::new(
            x - spec.min_separation_m,
            y - spec.min_separation_m,
            x + w + spec.min_separation_m,
            y + h + spec.min_separation_m,
        );
        if placed.iter().all(|p| !padded.intersects(p)) {
            placed.push(candidate);
        }
    }
    Ok(placed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stay::{extract_stays_twc, StayParams};

    #[test]
    fn same_seed_is_bit_identical() {
        let spec = ScenarioSpec {
            goi_count: 3,
            visits_per_goi: 2,
            dwell_min_s: 600,
            dwell_max_s: 900,
            gap_probability: 0.05,
            seed: 42,
            ..ScenarioSpec::default()
        };
        let a = generate_scenario(&spec).unwrap();
        let b = generate_scenario(&spec).unwrap();
        assert_eq!(a.trajectory.fixes(), b.trajectory.fixes());
        assert_eq!(a.visits, b.visits);
        let c = generate_scenario(&ScenarioSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a.trajectory.fixes(), c.trajectory.fixes());
    }

    #[test]
    fn gois_respect_separation() {
        let spec = ScenarioSpec {
            goi_count: 6,
            seed: 7,
            ..ScenarioSpec::default()
        };
        let s = generate_scenario(&spec).unwrap();
        let gois = s.truth.gois();
        assert_eq!(gois.len(), 6);
        for (i, (_, a)) in gois.iter().enumerate() {
            for (_, b) in &gois[i + 1..] {
                assert_eq!(a.intersection_area(b), 0.0);
            }
        }
    }

    #[test]
    fn noiseless_single_goi_yields_one_containing_stay() {
        let t_min = 600;
        let spec = ScenarioSpec {
            goi_count: 1,
            goi_size_min: 100.0,
            goi_size_max: 100.0,
            visits_per_goi: 1,
            dwell_min_s: 2 * t_min,
            dwell_max_s: 2 * t_min,
            noise_sigma_m: 0.0,
            sample_interval_s: 10,
            seed: 5,
            ..ScenarioSpec::default()
        };
        let s = generate_scenario(&spec).unwrap();
        let stays = extract_stays_twc(
            &s.trajectory,
            &StayParams {
                t_min,
                ..StayParams::default()
            },
        )
        .unwrap();
        assert_eq!(stays.len(), 1, "visits: {:?}", s.visits);
        // The buffered hull contains every in-dwell fix.
        let visit = s.visits[0];
        for tp in s.trajectory.points() {
            if tp.t >= visit.arrive && tp.t < visit.depart {
                assert!(stays[0].geometry.contains_point(tp.p));
            }
        }
    }

    #[test]
    fn timestamps_strictly_increase_with_gaps() {
        let spec = ScenarioSpec {
            goi_count: 2,
            visits_per_goi: 3,
            dwell_min_s: 300,
            dwell_max_s: 600,
            gap_probability: 0.2,
            gap_min_s: 100,
            gap_max_s: 500,
            seed: 11,
            ..ScenarioSpec::default()
        };
        let s = generate_scenario(&spec).unwrap();
        let fixes = s.trajectory.fixes();
        assert!(fixes.windows(2).all(|w| w[1].t > w[0].t));
        // Gaps actually occurred: some sampling interval exceeds the base.
        assert!(fixes
            .windows(2)
            .any(|w| w[1].t - w[0].t > spec.sample_interval_s));
    }

    #[test]
    fn config_round_trip() {
        let spec = ScenarioSpec {
            goi_count: 7,
            seed: 99,
            noise_sigma_m: 3.5,
            ..ScenarioSpec::default()
        };
        let parsed = ScenarioSpec::parse(&spec.to_config_string()).unwrap();
        assert_eq!(parsed, spec);
        assert!(ScenarioSpec::parse("nonsense_key = 3").is_err());
        assert!(ScenarioSpec::parse("goi_count: 3").is_err());
        let with_comment = ScenarioSpec::parse("# a comment\nseed = 4\n").unwrap();
        assert_eq!(with_comment.seed, 4);
    }
}
