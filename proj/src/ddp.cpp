#include "mobkit/ddp.hpp"

#include <cmath>
#include <cstdio>

#include "mobkit/error.hpp"
#include "mobkit/io.hpp"

namespace mobkit {

BinnedDay bin_day(const DayTrace& day, int timezone_offset_minutes) {
  BinnedDay out;
  out.participant_id = day.participant_id;
  out.date = day.date;

  double lat_sum[kBinsPerDay] = {};
  double lon_sum[kBinsPerDay] = {};
  int count[kBinsPerDay] = {};
  for (const GpsPoint& p : day.points) {
    const int bin =
        int(ms_of_local_day(p.timestamp_ms, timezone_offset_minutes) / kMsPerBin);
    lat_sum[bin] += p.latitude;
    lon_sum[bin] += p.longitude;
    ++count[bin];
  }
  for (int i = 0; i < kBinsPerDay; ++i) {
    if (count[i] > 0) {
      out.coords[i] = {lat_sum[i] / count[i], lon_sum[i] / count[i]};
      out.observed[i] = true;
      ++out.observed_count;
    }
  }
  return out;
}

BinnedDay impute_bins(const BinnedDay& binned) {
  if (binned.observed_count == 0)
    throw Error(errc::all_bins_absent,
                "no observed bins on " + date_to_string(binned.date));
  BinnedDay out = binned;
  int first = 0;
  while (!out.observed[first]) ++first;
  for (int i = 0; i < first; ++i) out.coords[i] = out.coords[first];
  for (int i = first + 1; i < kBinsPerDay; ++i)
    if (!out.observed[i]) out.coords[i] = out.coords[i - 1];
  return out;
}

DisplacementProfile ddp_from_binned(const BinnedDay& imputed, Group group) {
  DisplacementProfile p;
  p.participant_id = imputed.participant_id;
  p.date = imputed.date;
  p.group = group;
  for (int i = 0; i < kDdpLength; ++i)
    p.d[i] = haversine_m(imputed.coords[i], imputed.coords[i + 1]);
  return p;
}

std::optional<DisplacementProfile> build_ddp(const DayTrace& day, Group group,
                                             int timezone_offset_minutes,
                                             double min_coverage) {
  if (day.coverage_fraction < min_coverage) return std::nullopt;
  return ddp_from_binned(impute_bins(bin_day(day, timezone_offset_minutes)), group);
}

std::string bin_label(int bin_index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "H%02d%c", bin_index / 2,
                bin_index % 2 == 0 ? 'a' : 'b');
  return buf;
}

std::string ddp_heatmap_csv(const std::vector<DisplacementProfile>& profiles) {
  std::string out = "participant_id,local_date,bin,log_displacement\n";
  for (const auto& p : profiles) {
    for (int i = 0; i < kDdpLength; ++i) {
      out += p.participant_id;
      out += ',';
      out += date_to_string(p.date);
      out += ',';
      out += bin_label(i + 1);  // displacement labeled by its arrival bin
      out += ',';
      out += fmt_fixed(std::log1p(p.d[i]), 6);
      out += '\n';
    }
  }
  return out;
}

std::string ddp_to_csv(const std::vector<DisplacementProfile>& profiles) {
  std::string out = "participant_id,local_date,group";
  char col[8];
  for (int i = 0; i < kDdpLength; ++i) {
    std::snprintf(col, sizeof(col), ",d%02d", i);
    out += col;
  }
  out += '\n';
  for (const auto& p : profiles) {
    out += p.participant_id;
    out += ',';
    out += date_to_string(p.date);
    out += ',';
    out += group_name(p.group);
    for (int i = 0; i < kDdpLength; ++i) {
      out += ',';
      out += fmt_fixed(p.d[i], 3);
    }
    out += '\n';
  }
  return out;
}

std::vector<DisplacementProfile> ddp_from_csv(std::string_view csv) {
  std::vector<DisplacementProfile> out;
  bool saw_header = false;
  std::vector<std::string_view> f;
  for_each_line(csv, [&](std::string_view line) {
    if (!saw_header) {
      saw_header = true;
      if (line.substr(0, 29) != "participant_id,local_date,gro")
        throw Error(errc::malformed_header, "not a DDP csv");
      return;
    }
    if (line.empty()) return;
    split_csv_line(line, f);
    if (f.size() != 3 + kDdpLength)
      throw Error(errc::malformed_header, "bad DDP row width");
    DisplacementProfile p;
    p.participant_id = std::string(f[0]);
    auto date = parse_date(f[1]);
    auto g = parse_group(f[2]);
    if (!date || !g) throw Error(errc::malformed_header, "bad DDP row");
    p.date = *date;
    p.group = *g;
    for (int i = 0; i < kDdpLength; ++i) {
      auto v = parse_f64(f[3 + i]);
      if (!v) throw Error(errc::malformed_header, "bad DDP value");
      p.d[i] = *v;
    }
    out.push_back(std::move(p));
  });
  return out;
}

}  // namespace mobkit
