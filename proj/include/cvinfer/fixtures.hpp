#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvinfer/summary.hpp"

namespace cvinfer::fixtures {

/// Survival times of patients from four hospitals (raw values).
const std::vector<std::vector<double>>& hospital_values();
Dataset hospital_dataset();
/// RawLong CSV: header "group,value", one row per patient.
std::string hospital_csv();

/// One measurement of the abnormal blood samples, 1995 and 1996 surveys.
struct BloodColumn {
  std::string_view name;  // lower-case: rbc, mcv, hct, wbc, plt
  int n[2];
  double mean[2];
  double sd[2];
};

std::span<const BloodColumn> blood_columns();
const BloodColumn& blood_column(std::string_view name);
Dataset blood_dataset(std::string_view name);
/// SummaryWide CSV: header "group,n,mean,sd", one row per survey year.
std::string blood_csv(std::string_view name);

/// Writes hospital.csv and blood_<name>.csv into `dir`; returns the paths written.
std::vector<std::filesystem::path> write_all(const std::filesystem::path& dir);

}  // namespace cvinfer::fixtures
