#include "cvinfer/fixtures.hpp"

#include <fstream>
#include <sstream>

#include "cvinfer/error.hpp"

namespace cvinfer::fixtures {

namespace {

constexpr BloodColumn kBlood[] = {
    {"rbc", {65, 73}, {4.606, 4.574}, {0.0954, 0.0838}},
    {"mcv", {63, 72}, {87.25, 92.33}, {3.496, 3.078}},
    {"hct", {64, 72}, {0.4024, 0.4216}, {0.0194, 0.0168}},
    {"wbc", {65, 73}, {17.68, 18.93}, {1.067, 1.211}},
    {"plt", {64, 71}, {524.7, 466.5}, {37.05, 41.58}},
};

constexpr const char* kYears[2] = {"1995", "1996"};

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

const std::vector<std::vector<double>>& hospital_values() {
  static const std::vector<std::vector<double>> values = {
      {176, 105, 266, 227, 66},
      {24, 5, 155, 54},
      {58, 64, 15},
      {174, 42, 305, 92, 30, 82, 265, 237, 208, 147},
  };
  return values;
}

Dataset hospital_dataset() {
  std::vector<GroupObservations> groups;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < hospital_values().size(); ++i) {
    groups.push_back({hospital_values()[i]});
    labels.push_back("hospital" + std::to_string(i + 1));
  }
  return Dataset::from_raw(std::move(groups), std::move(labels));
}

std::string hospital_csv() {
  std::ostringstream os;
  os << "group,value\n";
  for (std::size_t i = 0; i < hospital_values().size(); ++i) {
    for (double v : hospital_values()[i]) os << "hospital" << i + 1 << ',' << v << '\n';
  }
  return os.str();
}

std::span<const BloodColumn> blood_columns() { return kBlood; }

const BloodColumn& blood_column(std::string_view name) {
  for (const auto& c : kBlood) {
    if (c.name == name) return c;
  }
  throw Error(ErrorKind::InvalidParameter, "unknown blood measurement '" + std::string(name) + "'");
}

Dataset blood_dataset(std::string_view name) {
  const BloodColumn& c = blood_column(name);
  return Dataset({summary_from_moments(c.n[0], c.mean[0], c.sd[0]), summary_from_moments(c.n[1], c.mean[1], c.sd[1])},
                 {kYears[0], kYears[1]});
}

std::string blood_csv(std::string_view name) {
  const BloodColumn& c = blood_column(name);
  std::ostringstream os;
  os << "group,n,mean,sd\n";
  for (int y = 0; y < 2; ++y) os << kYears[y] << ',' << c.n[y] << ',' << c.mean[y] << ',' << c.sd[y] << '\n';
  return os.str();
}

std::vector<std::filesystem::path> write_all(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  written.push_back(dir / "hospital.csv");
  write_file(written.back(), hospital_csv());
  for (const auto& c : kBlood) {
    written.push_back(dir / ("blood_" + std::string(c.name) + ".csv"));
    write_file(written.back(), blood_csv(c.name));
  }
  return written;
}

}  // namespace cvinfer::fixtures
