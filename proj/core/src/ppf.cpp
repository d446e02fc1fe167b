#include "cpd/ppf.hpp"

#include <sstream>

#include "cpd/error.hpp"
#include "cpd/parser.hpp"

namespace cpd {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

}  // namespace

std::string ppf_source(const std::vector<std::size_t>& ops) {
  if (ops.empty()) throw ModelError("ppf: at least one page counter is required");
  for (auto j : ops)
    if (j == 0) throw ModelError("ppf: every page counter needs at least one maintenance operation");

  const std::size_t n = ops.size();
  auto idx = [](std::size_t i) { return std::to_string(i + 1); };
  auto mo = [&](std::size_t i, std::size_t j) { return "MO_" + idx(i) + "_" + idx(j); };

  std::vector<std::string> ctrl{"Stb2Run", "Run2Stb"};
  std::vector<std::string> unctrl{"_InRun", "_InStb", "_NewJob", "_JobFin"};
  for (std::size_t i = 0; i < n; ++i) {
    ctrl.push_back("SchOper_" + idx(i));
    for (std::size_t j = 0; j < ops[i]; ++j) ctrl.push_back("OpStart_" + idx(i) + "_" + idx(j));
    for (auto u : {"_OpFin_", "_SoftDln_", "_HardDln_", "_ExOper_"}) unctrl.push_back(u + idx(i));
  }

  std::ostringstream os;
  os << "// printing process function, " << n << " page counter(s)\n";
  os << "controllable " << join(ctrl, ", ") << ";\n";
  os << "uncontrollable " << join(unctrl, ", ") << ";\n\n";
  os << "var CPM : 1..4 = 1;\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < ops[i]; ++j) os << "var " << mo(i, j) << " : 1..2 = 1;\n";
  for (std::size_t i = 0; i < n; ++i) os << "var PC_" << idx(i) << " : 1..3 = 1;\n";
  for (std::size_t i = 0; i < n; ++i) os << "var MS_" << idx(i) << " : 1..3 = 1;\n";
  os << "var TPM : 1..2 = 1;\n\n";

  os << "proc CurrentPowerMode = (Stb2Run?[CPM := 2] . _InRun![CPM := 3] . Run2Stb?[CPM := 4] . _InStb![CPM := 1] . 1 + 1)*;\n";
  std::vector<std::string> components{"CurrentPowerMode"};
  for (std::size_t i = 0; i < n; ++i) {
    const auto I = idx(i);
    os << "proc MaintenanceScheduling_" << I << " = (SchOper_" << I << "?[MS_" << I << " := 2] . _ExOper_" << I << "![MS_" << I
       << " := 3] . _OpFin_" << I << "?[MS_" << I << " := 1] . 1 + 1)*;\n";
    components.push_back("MaintenanceScheduling_" + I);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < ops[i]; ++j) {
      const auto M = mo(i, j);
      os << "proc MaintenanceOperation_" << idx(i) << "_" << idx(j) << " = (OpStart_" << idx(i) << "_" << idx(j) << "?[" << M << " := 2] . _OpFin_" << idx(i)
         << "![" << M << " := 1] . 1 + 1)*;\n";
      components.push_back("MaintenanceOperation_" + idx(i) + "_" + idx(j));
    }
  for (std::size_t i = 0; i < n; ++i) {
    const auto I = idx(i);
    const auto P = "PC_" + I;
    os << "proc PageCounter_" << I << " = (_SoftDln_" << I << "![" << P << " := 2] . (_HardDln_" << I << "![" << P
       << " := 3] . _OpFin_" << I << "?[" << P << " := 1] . 1 + _OpFin_" << I << "?[" << P
       << " := 1] . 1) + _OpFin_" << I << "? . 1 + 1)*;\n";
    components.push_back("PageCounter_" + I);
  }
  os << "proc TargetPowerMode = (_NewJob![TPM := 2] . _JobFin![TPM := 1] . 1 + 1)*;\n";
  components.push_back("TargetPowerMode");

  std::vector<std::string> h;
  for (std::size_t i = 0; i < n; ++i) {
    const auto I = idx(i);
    h.push_back("_OpFin_" + I + "?");
    h.push_back("_OpFin_" + I + "?_2");
    h.push_back("_OpFin_" + I + "!?");
  }
  os << "proc PPF = encap{" << join(h, ", ") << "}(" << join(components, " || ") << ");\n\n";
  os << "plant PPF;\n\n";

  std::vector<std::string> busy;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < ops[i]; ++j) busy.push_back(mo(i, j) + " = 2");
  os << "require invariant !(CPM != 1 & (" << join(busy, " | ") << "));\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto I = idx(i);
    os << "require event SchOper_" << I << "!? implies (PC_" << I << " = 2 & TPM = 1) | PC_" << I << " = 3;\n";
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < ops[i]; ++j)
      os << "require event OpStart_" << idx(i) << "_" << idx(j) << "!? implies MS_" << idx(i) << " = 3;\n";
  std::vector<std::string> idle, scheduled;
  for (std::size_t i = 0; i < n; ++i) {
    idle.push_back("MS_" + idx(i) + " != 3");
    scheduled.push_back("MS_" + idx(i) + " = 3");
  }
  os << "require event Stb2Run!? implies TPM = 2 & " << join(idle, " & ") << ";\n";
  os << "require event Run2Stb!? implies TPM = 1 | " << join(scheduled, " | ") << ";\n";
  return os.str();
}

SystemSpec instantiate_ppf(std::size_t counters, const std::vector<std::size_t>& ops) {
  if (counters == 0) throw ModelError("ppf: at least one page counter is required");
  if (ops.size() != counters) throw ModelError("ppf: expected one operation count per page counter");
  return parse(ppf_source(ops));
}

std::string ppf_1_1_supervisor_source() {
  return "proc S = ((PC_1 = 2 & TPM = 1) | PC_1 = 3 -> SchOper_1! . 1\n"
         "        + CPM = 1 & MS_1 = 3 -> OpStart_1_1! . 1\n"
         "        + MS_1 != 3 & TPM = 2 & MO_1_1 != 2 -> Stb2Run! . 1\n"
         "        + (MS_1 != 3 & TPM = 1) | MS_1 = 3 -> Run2Stb! . 1\n"
         "        + 1)*;\n"
         "supervisor S;\n";
}

}  // namespace cpd
