#include <openssl/evp.h>

#include <algorithm>
#include <map>

#include <json.hpp>

#include "hvacsim/csv.hpp"
#include "hvacsim/error.hpp"
#include "hvacsim/harness.hpp"

namespace hvacsim {

namespace fs = std::filesystem;
using csv::format_double;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::IoError, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string safe_name(std::string_view id) {
  std::string out(id);
  for (auto& c : out) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) c = '_';
  }
  return out;
}

std::string join(std::initializer_list<std::string> fields) {
  std::string out;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out += ',';
    out += f;
    first = false;
  }
  out += '\n';
  return out;
}

std::string metrics_csv(const SweepReport& report) {
  std::string out =
      "condition,strategy,fp_rate,fn_rate,bounds,seed,total_energy_kwh,comfort_mode,misstime_mean_min,"
      "misstime_sd_min,misstime_pooled_min,misstime_band_mean_min,misstime_fixed_mean_min,realized_fp_rate,"
      "realized_fn_rate,accuracy_pooled,accuracy_room_mean,mean_occ_fraction\n";
  for (const auto& c : report.conditions) {
    const auto& m = c.metrics;
    const auto& l = m.label;
    out += join({l.key(), l.strategy, opt(l.fp_rate), opt(l.fn_rate), l.bounds, std::to_string(l.seed),
                 format_double(m.total_energy_kwh), std::string(to_string(m.comfort_mode)),
                 format_double(m.misstime().mean), format_double(m.misstime().sd), format_double(m.misstime().pooled),
                 format_double(m.misstime_band.mean), format_double(m.misstime_fixed.mean), opt(m.realized_fp_rate),
                 opt(m.realized_fn_rate), m.accuracy ? format_double(m.accuracy->pooled) : "",
                 m.accuracy ? format_double(m.accuracy->room_mean) : "", format_double(m.mean_occ_fraction)});
  }
  return out;
}

std::string monthly_csv(const SweepReport& report) {
  std::string out = "condition,month,energy_kwh\n";
  for (const auto& c : report.conditions) {
    for (const auto& [month, kwh] : c.metrics.monthly_energy_kwh) {
      out += join({c.metrics.label.key(), month, format_double(kwh)});
    }
  }
  return out;
}

std::string figure2_csv(const SweepReport& report) {
  std::string out = "seed,fp_rate,fn_rate,bounds,energy_kwh,accuracy_pooled,accuracy_room_mean\n";
  for (const auto& c : report.conditions) {
    const auto& m = c.metrics;
    if (!m.label.is_predictive()) continue;
    out += join({std::to_string(m.label.seed), opt(m.label.fp_rate), opt(m.label.fn_rate), m.label.bounds,
                 format_double(m.total_energy_kwh), format_double(m.accuracy->pooled),
                 format_double(m.accuracy->room_mean)});
  }
  return out;
}

std::string figure3_csv(const SweepReport& report) {
  std::string out = "seed,fp_rate,fn_rate,bounds,energy_kwh,baseline,baseline_kwh,savings_pct\n";
  for (const auto& c : report.conditions) {
    const auto& m = c.metrics;
    if (!m.label.is_predictive()) continue;
    for (const auto& b : report.conditions) {
      const auto& bl = b.metrics.label;
      if (bl.is_predictive() || bl.seed != m.label.seed) continue;
      out += join({std::to_string(m.label.seed), opt(m.label.fp_rate), opt(m.label.fn_rate), m.label.bounds,
                   format_double(m.total_energy_kwh), bl.strategy + "@" + bl.bounds,
                   format_double(b.metrics.total_energy_kwh),
                   format_double(percent_savings(m.total_energy_kwh, b.metrics.total_energy_kwh))});
    }
  }
  return out;
}

std::string figure4_csv(const SweepReport& report) {
  std::string out = "seed,condition,strategy,fp_rate,fn_rate,bounds,misstime_mean_min,misstime_sd_min,misstime_pooled_min\n";
  for (const auto& c : report.conditions) {
    const auto& m = c.metrics;
    out += join({std::to_string(m.label.seed), m.label.key(), m.label.strategy, opt(m.label.fp_rate),
                 opt(m.label.fn_rate), m.label.bounds, format_double(m.misstime().mean),
                 format_double(m.misstime().sd), format_double(m.misstime().pooled)});
  }
  return out;
}

std::string rates_csv(const SweepReport& report) {
  std::string out = "condition,seed,room_id,fp_rate,fn_rate,accuracy,occ_fraction\n";
  for (const auto& c : report.conditions) {
    for (const auto& r : c.rooms) {
      if (!r.rates) continue;
      out += join({c.metrics.label.key(), std::to_string(c.metrics.label.seed), r.room_id,
                   format_double(r.rates->fp_rate), format_double(r.rates->fn_rate),
                   format_double(r.rates->accuracy), format_double(r.occ_fraction)});
    }
  }
  return out;
}

std::string sensitivity_csv(const SweepReport& report) {
  std::string out = "factor,metric,from_rate,to_rate,mean_from,mean_to,abs_delta,pct_delta\n";
  std::vector<SensitivityRow> rows;
  try {
    rows = sensitivity_table(report);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientGrid) throw;
  }
  for (const auto& r : rows) {
    out += join({r.factor, r.metric, format_double(r.from_rate), format_double(r.to_rate), format_double(r.mean_from),
                 format_double(r.mean_to), format_double(r.abs_delta), format_double(r.pct_delta)});
  }
  return out;
}

}  // namespace

void write_tables(const SweepReport& report, const fs::path& dir) {
  const std::vector<std::pair<std::string, std::string>> tables = {
      {"metrics.csv", metrics_csv(report)},       {"monthly.csv", monthly_csv(report)},
      {"figure2.csv", figure2_csv(report)},       {"figure3.csv", figure3_csv(report)},
      {"figure4.csv", figure4_csv(report)},       {"rates_report.csv", rates_csv(report)},
      {"sensitivity.csv", sensitivity_csv(report)},
  };
  nlohmann::json manifest;
  manifest["software"] = {{"name", kSoftwareName}, {"version", kSoftwareVersion}};
  manifest["config"] = report.provenance.config_text;
  manifest["config_sha256"] = report.provenance.config_sha256;
  manifest["seeds"] = report.provenance.seeds;
  manifest["comfort_mode"] = to_string(report.provenance.comfort_mode);
  manifest["conditions"] = report.conditions.size();
  manifest["dst_days"] = report.provenance.dst_days;
  for (const auto& [name, content] : tables) {
    csv::write_file(dir / name, content);
    manifest["files"][name] = sha256_hex(content);
  }
  csv::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

void write_report(const SweepReport& report, const fs::path& dir) {
  std::string conditions = "key,strategy,fp_rate,fn_rate,bounds,seed\n";
  for (const auto& c : report.conditions) {
    const auto& l = c.metrics.label;
    const auto key = l.key();
    conditions += join({key, l.strategy, opt(l.fp_rate), opt(l.fn_rate), l.bounds, std::to_string(l.seed)});
    std::string rooms = "room_id,days,occ_fraction,miss_minutes_band,miss_minutes_fixed,tp,tn,fp,fn\n";
    for (const auto& r : c.rooms) {
      const auto count = [&](std::size_t ConfusionCounts::*field) {
        return r.rates ? std::to_string(r.rates->counts.*field) : std::string();
      };
      rooms += join({r.room_id, format_double(r.days), format_double(r.occ_fraction), format_double(r.miss_minutes_band),
                     format_double(r.miss_minutes_fixed), count(&ConfusionCounts::tp), count(&ConfusionCounts::tn),
                     count(&ConfusionCounts::fp), count(&ConfusionCounts::fn)});
      std::string monthly = "month,energy_kwh\n";
      for (const auto& [month, kwh] : r.monthly_energy_kwh) monthly += join({month, format_double(kwh)});
      csv::write_file(dir / "raw" / key / (safe_name(r.room_id) + ".csv"), monthly);
    }
    csv::write_file(dir / "raw" / key / "rooms.csv", rooms);
  }
  csv::write_file(dir / "raw" / "conditions.csv", conditions);
  write_tables(report, dir);
}

SweepReport load_report(const fs::path& dir) {
  SweepReport report;
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(csv::read_file(dir / "manifest.json"));
    report.provenance.config_text = manifest.at("config").get<std::string>();
    report.provenance.config_sha256 = manifest.at("config_sha256").get<std::string>();
    report.provenance.seeds = manifest.at("seeds").get<std::vector<std::uint64_t>>();
    report.provenance.comfort_mode = parse_comfort_mode(manifest.at("comfort_mode").get<std::string>());
    report.provenance.dst_days = manifest.value("dst_days", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedRow, "manifest.json: " + std::string(e.what()));
  }

  const auto cond_text = csv::read_file(dir / "raw" / "conditions.csv");
  const auto cond_rows = csv::lines(cond_text);
  for (std::size_t i = 1; i < cond_rows.size(); ++i) {
    const auto f = csv::split(cond_rows[i]);
    if (f.size() != 6) throw Error(ErrorKind::MalformedRow, "raw/conditions.csv line " + std::to_string(i + 1));
    ConditionLabel label;
    label.strategy = std::string(f[1]);
    if (!f[2].empty()) label.fp_rate = csv::parse_double(f[2], "fp_rate");
    if (!f[3].empty()) label.fn_rate = csv::parse_double(f[3], "fn_rate");
    label.bounds = std::string(f[4]);
    label.seed = static_cast<std::uint64_t>(csv::parse_int(f[5], "seed"));
    if (label.key() != f[0]) throw Error(ErrorKind::MalformedRow, "condition key mismatch for " + std::string(f[0]));

    const fs::path cdir = dir / "raw" / std::string(f[0]);
    std::vector<RoomRecord> rooms;
    const auto room_text = csv::read_file(cdir / "rooms.csv");
    const auto room_rows = csv::lines(room_text);
    for (std::size_t j = 1; j < room_rows.size(); ++j) {
      const auto r = csv::split(room_rows[j]);
      if (r.size() != 9) throw Error(ErrorKind::MalformedRow, (cdir / "rooms.csv").string());
      RoomRecord rec;
      rec.room_id = std::string(r[0]);
      rec.days = csv::parse_double(r[1], "days");
      rec.occ_fraction = csv::parse_double(r[2], "occ_fraction");
      rec.miss_minutes_band = csv::parse_double(r[3], "miss_minutes_band");
      rec.miss_minutes_fixed = csv::parse_double(r[4], "miss_minutes_fixed");
      if (!r[5].empty()) {
        ConfusionCounts counts;
        counts.tp = static_cast<std::size_t>(csv::parse_int(r[5], "tp"));
        counts.tn = static_cast<std::size_t>(csv::parse_int(r[6], "tn"));
        counts.fp = static_cast<std::size_t>(csv::parse_int(r[7], "fp"));
        counts.fn = static_cast<std::size_t>(csv::parse_int(r[8], "fn"));
        rec.rates = rate_report(rec.room_id, counts);
      }
      const auto monthly_text = csv::read_file(cdir / (safe_name(rec.room_id) + ".csv"));
      const auto monthly = csv::lines(monthly_text);
      for (std::size_t k = 1; k < monthly.size(); ++k) {
        const auto m = csv::split(monthly[k]);
        if (m.size() != 2) throw Error(ErrorKind::MalformedRow, "monthly energy row for " + rec.room_id);
        rec.monthly_energy_kwh[std::string(m[0])] = csv::parse_double(m[1], "energy_kwh");
      }
      rooms.push_back(std::move(rec));
    }
    report.conditions.push_back(ConditionOutput{aggregate(label, rooms, report.provenance.comfort_mode), rooms});
  }
  return report;
}

std::vector<ScheduleFiles> export_schedules(const std::vector<SetpointSchedule>& schedules, const fs::path& dir) {
  if (schedules.empty()) throw Error(ErrorKind::EmptyInput, "no schedules to export");
  std::vector<ScheduleFiles> files;
  std::string manifest = "room_id,heating_file,cooling_file,start,step_minutes,n_steps\n";
  try {
    fs::create_directories(dir);
    for (const auto& s : schedules) {
      const auto base = safe_name(s.room_id);
      ScheduleFiles f{dir / (base + "_heating.csv"), dir / (base + "_cooling.csv")};
      std::string heat, cool;
      for (std::size_t t = 0; t < s.grid.n_steps; ++t) {
        heat += format_double(s.heat_sp_c[t]) + "\n";
        cool += format_double(s.cool_sp_c[t]) + "\n";
      }
      csv::write_file(f.heating, heat);
      csv::write_file(f.cooling, cool);
      manifest += join({s.room_id, f.heating.filename().string(), f.cooling.filename().string(),
                        format_timestamp(s.grid.start), std::to_string(s.grid.step_minutes),
                        std::to_string(s.grid.n_steps)});
      files.push_back(std::move(f));
    }
    csv::write_file(dir / "schedules_manifest.csv", manifest);
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorKind::IoError, e.what());
  }
  return files;
}

std::vector<double> read_schedule_file(const fs::path& path) {
  const auto content = csv::read_file(path);
  std::vector<double> out;
  std::size_t begin = 0;
  while (begin < content.size()) {
    const auto end = content.find('\n', begin);
    if (end == std::string::npos) throw Error(ErrorKind::MalformedRow, path.string() + ": missing final newline");
    out.push_back(csv::parse_double(std::string_view(content).substr(begin, end - begin), path.string()));
    begin = end + 1;
  }
  return out;
}

}  // namespace hvacsim
