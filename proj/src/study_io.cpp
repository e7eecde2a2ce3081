#include "prospector/study_io.hpp"

#include "prospector/errors.hpp"
#include "prospector/network_io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

namespace prospector {

namespace {

template <typename Writer>
void save_with(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  writer(out);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace

std::string_view to_string(FilterMode mode) {
  switch (mode) {
    case FilterMode::Full: return "full";
    case FilterMode::Literal: return "literal";
    case FilterMode::Off: return "off";
  }
  return "full";
}

void write_results(std::ostream& out, const StudyReport& report) {
  out << "network_id,kind,pattern,p_new_e1,p_new_e2,conjunctive,disjunctive,independent,oracle,"
         "error_conjunctive,error_disjunctive,error_independent\n";
  for (const auto& r : report.records) {
    const auto& network = report.networks.at(r.network_id);
    out << r.network_id << ',' << to_string(network.kind) << ',' << to_string(network.pattern) << ','
        << format_exact(r.update.p_new_e1) << ',' << format_exact(r.update.p_new_e2);
    for (double v : r.prospector) out << ',' << format_exact(v);
    out << ',' << format_exact(r.oracle);
    for (double v : r.signed_error) out << ',' << format_exact(v);
    out << '\n';
  }
}

void write_report(std::ostream& out, const StudyReport& report) {
  out << "# prospector study report\n";
  out << "grid = ";
  for (std::size_t i = 0; i < report.grid.size(); ++i) out << (i ? "," : "") << format_exact(report.grid[i]);
  out << "\nfilter = " << to_string(report.filter) << "\n";

  out << "\n[table1]\n"
         "relation,generated,filtered_in,conjunctive,disjunctive,independent,"
         "overall_average_error,overall_maximum_error\n";
  for (const auto& c : report.classes) {
    out << to_string(c.kind) << ',' << c.generated << ',' << c.filtered_in;
    for (auto count : c.best_counts) out << ',' << count;
    out << ',' << format_exact(c.overall_average_error) << ',' << format_exact(c.overall_maximum_error)
        << '\n';
  }

  out << "\n[networks]\nid,kind,seed,index,resamples,pattern,included,best,tie";
  for (RuleSet rule : kRuleSets) {
    out << ",average_signed_" << to_string(rule) << ",average_absolute_" << to_string(rule)
        << ",maximum_absolute_" << to_string(rule);
  }
  out << '\n';
  for (const auto& n : report.networks) {
    out << n.id << ',' << to_string(n.kind) << ',';
    if (n.provenance) {
      out << n.provenance->seed << ',' << n.provenance->index << ',' << n.provenance->resamples;
    } else {
      out << ",,";
    }
    out << ',' << to_string(n.pattern) << ',' << (n.included ? 1 : 0);
    if (n.summary) {
      out << ',' << to_string(n.summary->best) << ',' << (n.summary->tie ? 1 : 0);
      for (const auto& s : n.summary->by_rule) {
        out << ',' << format_exact(s.average_signed) << ',' << format_exact(s.average_absolute) << ','
            << format_exact(s.maximum_absolute);
      }
    } else {
      out << ",,,,,,,,,,,";
    }
    out << '\n';
  }

  out << "\n[diagnostics]\nid,conjunctive_approximation,conjunctive_spread,conjunctive_gap,"
         "disjunctive_approximation,disjunctive_spread,disjunctive_gap,associative_strength\n";
  for (const auto& n : report.networks) {
    const auto& d = n.diagnostics;
    out << n.id << ',' << format_exact(d.conjunctive_approximation) << ','
        << format_exact(d.conjunctive_spread) << ',' << format_exact(d.conjunctive_gap) << ','
        << format_exact(d.disjunctive_approximation) << ',' << format_exact(d.disjunctive_spread)
        << ',' << format_exact(d.disjunctive_gap) << ',' << format_exact(d.associative_strength)
        << '\n';
  }

  out << "\n[strength_error]\nid,associative_strength,best_average_absolute_error\n";
  for (const auto& p : report.strength_error) {
    out << p.network_id << ',' << format_exact(p.strength) << ',' << format_exact(p.error) << '\n';
  }
}

void write_surface(std::ostream& out, std::span<const SurfacePoint> surface) {
  out << "p_new_e1,p_new_e2,signed_error\n";
  for (const auto& p : surface) {
    out << format_exact(p.p_new_e1) << ',' << format_exact(p.p_new_e2) << ','
        << format_exact(p.signed_error) << '\n';
  }
}

void print_table1(std::ostream& out, const StudyReport& report) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(6);
  out << "Most accurate rule set by relation of evidence\n";
  out << std::left << std::setw(14) << "relation" << std::right << std::setw(10) << "generated"
      << std::setw(10) << "filtered" << std::setw(13) << "conjunctive" << std::setw(13)
      << "disjunctive" << std::setw(13) << "independent" << std::setw(14) << "avg error"
      << std::setw(14) << "max error" << '\n';
  for (const auto& c : report.classes) {
    out << std::left << std::setw(14) << to_string(c.kind) << std::right << std::setw(10)
        << c.generated << std::setw(10) << c.filtered_in;
    for (auto count : c.best_counts) out << std::setw(13) << count;
    out << std::setw(14) << c.overall_average_error << std::setw(14) << c.overall_maximum_error
        << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

void save_results(const std::filesystem::path& path, const StudyReport& report) {
  save_with(path, [&](std::ostream& out) { write_results(out, report); });
}

void save_report(const std::filesystem::path& path, const StudyReport& report) {
  save_with(path, [&](std::ostream& out) { write_report(out, report); });
}

void save_surface(const std::filesystem::path& path, std::span<const SurfacePoint> surface) {
  save_with(path, [&](std::ostream& out) { write_surface(out, surface); });
}

}  // namespace prospector
