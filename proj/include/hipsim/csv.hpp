#pragma once

#include <string>
#include <vector>

#include "hipsim/calibration.hpp"
#include "hipsim/integrator.hpp"

namespace hipsim {

//! Serialize doubles with 17 significant digits (lossless round-trip).
std::string format_double(double v);

//! Write content to path atomically (temp file + rename).
void atomic_write(const std::string& path, const std::string& content);

//! Trajectory CSV, fixed column order:
//! t,T,P,sigma_11,sigma_22,sigma_33,sigma_12,sigma_23,sigma_13,rho,sigma_eqv
std::string trajectory_csv(const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
//! Re-parse an emitted trajectory CSV (strain is not serialized and reads
//! back as zero).
Trajectory read_trajectory_csv(const std::string& path);

//! Dataset CSV readers. Expected headers:
//!   dense yield:   T_C,strain_rate_per_s,sigma02_MPa
//!   porous yield:  T_C,rho,strain_rate_per_s,sigma02_MPa
//!   densification: t_s,rho
std::vector<DenseYieldPoint> read_dense_yield_csv(const std::string& path);
std::vector<PorousYieldPoint> read_porous_yield_csv(const std::string& path);
std::vector<DensificationPoint> read_densification_csv(const std::string& path);

std::string dense_yield_csv(const std::vector<DenseYieldPoint>& rows);
std::string porous_yield_csv(const std::vector<PorousYieldPoint>& rows);
std::string densification_csv(const std::vector<DensificationPoint>& rows);

}  // namespace hipsim
