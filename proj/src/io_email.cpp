#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <set>

#include "memnet/civil_time.hpp"
#include "memnet/io.hpp"
#include "memnet/log.hpp"

namespace memnet::io {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim_copy(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Accepts "addr", "<addr>", "Name <addr>", quoted display names. Returns an
// empty string when no plausible address is found.
std::string extract_address(const std::string& field) {
    std::string s = trim_copy(field);
    const auto lt = s.find('<');
    if (lt != std::string::npos) {
        const auto gt = s.find('>', lt);
        s = gt == std::string::npos ? s.substr(lt + 1) : s.substr(lt + 1, gt - lt - 1);
        s = trim_copy(s);
    }
    while (!s.empty() && (s.front() == '"' || s.front() == '\'')) s.erase(s.begin());
    while (!s.empty() && (s.back() == '"' || s.back() == '\'')) s.pop_back();
    s = lower(trim_copy(s));
    if (s.find('@') == std::string::npos) return {};
    for (const char c : s)
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';') return {};
    return s;
}

std::vector<std::string> split_addresses(const std::string& field) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : field) {
        if (c == ',' || c == ';') {
            if (auto a = extract_address(cur); !a.empty()) out.push_back(std::move(a));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (auto a = extract_address(cur); !a.empty()) out.push_back(std::move(a));
    return out;
}

int month_from_name(const std::string& name) {
    static const std::array<const char*, 12> names = {"jan", "feb", "mar", "apr", "may", "jun",
                                                      "jul", "aug", "sep", "oct", "nov", "dec"};
    const std::string l = lower(name).substr(0, 3);
    for (int i = 0; i < 12; ++i)
        if (l == names[i]) return i + 1;
    return 0;
}

// RFC 2822 style: "[Wkd, ]D Mon YYYY HH:MM[:SS] (+|-)ZZZZ[ (TZ)]".
bool parse_rfc822_date(const std::string& text, std::int64_t& epoch_out) {
    std::string s = trim_copy(text);
    if (const auto comma = s.find(','); comma != std::string::npos) s = trim_copy(s.substr(comma + 1));

    std::vector<std::string> toks;
    {
        std::string cur;
        for (const char c : s) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!cur.empty()) toks.push_back(std::move(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) toks.push_back(std::move(cur));
    }
    if (toks.size() < 4) return false;

    int day = 0, year = 0;
    if (auto [p, ec] = std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), day);
        ec != std::errc() || day < 1 || day > 31)
        return false;
    const int month = month_from_name(toks[1]);
    if (month == 0) return false;
    if (auto [p, ec] = std::from_chars(toks[2].data(), toks[2].data() + toks[2].size(), year);
        ec != std::errc())
        return false;
    if (year < 100) year += year < 50 ? 2000 : 1900;

    unsigned hh = 0, mm = 0, ss = 0;
    if (std::sscanf(toks[3].c_str(), "%u:%u:%u", &hh, &mm, &ss) < 2) return false;
    if (hh > 23 || mm > 59 || ss > 60) return false;

    std::int64_t offset = 0;
    if (toks.size() >= 5 && (toks[4][0] == '+' || toks[4][0] == '-') && toks[4].size() == 5) {
        const int sign = toks[4][0] == '-' ? -1 : 1;
        const int oh = (toks[4][1] - '0') * 10 + (toks[4][2] - '0');
        const int om = (toks[4][3] - '0') * 10 + (toks[4][4] - '0');
        offset = sign * (oh * 3600 + om * 60);
    }

    epoch_out = civil::days_from_civil(year, static_cast<unsigned>(month),
                                       static_cast<unsigned>(day)) *
                    86400 +
                hh * 3600 + mm * 60 + ss - offset;
    return true;
}

} // namespace

email_stream_stats stream_simple_log(std::istream& in, const email_callback& cb) {
    email_stream_stats st;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        ++st.records;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            ++st.malformed;
            continue;
        }
        email_record rec;
        if (!civil::parse_instant(trim_copy(line.substr(0, t1)), rec.timestamp)) {
            ++st.malformed;
            continue;
        }
        rec.sender = extract_address(line.substr(t1 + 1, t2 - t1 - 1));
        if (rec.sender.empty()) {
            ++st.malformed;
            continue;
        }
        rec.recipients = split_addresses(line.substr(t2 + 1));
        cb(rec);
    }
    return st;
}

namespace {

// Streams CSV records (RFC 4180 quoting, multi-line fields). Returns false at
// end of input.
bool next_csv_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string cur;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        const char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    cur += '"';
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (ch == '\n') {
            break;
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    if (!any) return false;
    fields.push_back(std::move(cur));
    return true;
}

// Pulls the RFC822 headers out of a raw message; folded continuation lines
// are unfolded before matching.
struct message_headers {
    std::string date;
    std::string from;
    std::string to;
    std::string cc;
    std::string bcc;
};

message_headers scan_headers(const std::string& message) {
    message_headers h;
    std::string* active = nullptr;
    std::size_t pos = 0;
    while (pos < message.size()) {
        std::size_t eol = message.find('\n', pos);
        if (eol == std::string::npos) eol = message.size();
        const std::string line = message.substr(pos, eol - pos);
        pos = eol + 1;
        if (trim_copy(line).empty()) break; // end of headers
        if (line[0] == ' ' || line[0] == '\t') {
            if (active != nullptr) *active += " " + trim_copy(line);
            continue;
        }
        active = nullptr;
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        const std::string key = lower(line.substr(0, colon));
        const std::string value = trim_copy(line.substr(colon + 1));
        if (key == "date") {
            h.date = value;
            active = &h.date;
        } else if (key == "from") {
            h.from = value;
            active = &h.from;
        } else if (key == "to") {
            h.to = value;
            active = &h.to;
        } else if (key == "cc") {
            h.cc = value;
            active = &h.cc;
        } else if (key == "bcc") {
            h.bcc = value;
            active = &h.bcc;
        }
    }
    return h;
}

} // namespace

email_stream_stats stream_kaggle_csv(std::istream& in, const email_callback& cb) {
    email_stream_stats st;
    std::vector<std::string> fields;
    bool first = true;
    while (next_csv_record(in, fields)) {
        if (first) {
            first = false; // header row
            continue;
        }
        if (fields.size() < 2 || trim_copy(fields.back()).empty()) {
            if (!(fields.size() == 1 && trim_copy(fields[0]).empty())) ++st.malformed;
            continue;
        }
        ++st.records;
        const message_headers h = scan_headers(fields.back());
        email_record rec;
        if (!parse_rfc822_date(h.date, rec.timestamp)) {
            ++st.malformed;
            continue;
        }
        rec.sender = extract_address(h.from);
        if (rec.sender.empty()) {
            ++st.malformed;
            continue;
        }
        std::set<std::string> rcpt;
        for (const auto* part : {&h.to, &h.cc, &h.bcc})
            for (auto& a : split_addresses(*part)) rcpt.insert(std::move(a));
        rec.recipients.assign(rcpt.begin(), rcpt.end());
        cb(rec);
    }
    return st;
}

// ---- ingestor ---------------------------------------------------------------

email_ingestor::email_ingestor(const ingest_options& opts) : opts_(opts) {
    if (opts_.range_end <= opts_.range_begin)
        fail(errc::invalid_config, "ingest range is empty");
    if (opts_.range_begin % 86400 != 0 || opts_.range_end % 86400 != 0)
        fail(errc::invalid_config, "ingest range must start at midnight UTC");
    n_days_ = static_cast<std::size_t>((opts_.range_end - opts_.range_begin) / 86400);
}

std::int64_t email_ingestor::address_id(const std::string& addr) {
    const auto [it, inserted] = address_ids_.try_emplace(addr, addresses_.size());
    if (inserted) {
        addresses_.push_back(addr);
        sent_total_.push_back(0);
    }
    return it->second;
}

void email_ingestor::add(const email_record& rec) {
    ++emails_seen_;
    if (rec.timestamp < opts_.range_begin || rec.timestamp >= opts_.range_end) return;
    ++emails_in_range_;
    const auto day = static_cast<std::uint64_t>((rec.timestamp - opts_.range_begin) / 86400);
    const std::int64_t s = address_id(rec.sender);
    ++sent_total_[s];
    // One email counts once in the sender's daily series regardless of the
    // recipient count.
    ++daily_sent_[(static_cast<std::uint64_t>(s) << 32) | day];
    for (const auto& r : rec.recipients) {
        if (r == rec.sender) continue;
        const std::int64_t t = address_id(r);
        const auto a = static_cast<std::uint64_t>(std::min(s, t));
        const auto b = static_cast<std::uint64_t>(std::max(s, t));
        pairs_.insert((a << 32) | b);
    }
}

ingest_summary email_ingestor::write(const std::string& out_dir, dataset_manifest* manifest_out) {
    ingest_summary sum;
    sum.emails_seen = emails_seen_;
    sum.emails_in_range = emails_in_range_;
    sum.malformed = malformed_;
    sum.addresses_seen = addresses_.size();
    sum.n_steps = n_days_;

    // Survivors, ordered by address for stable ids.
    std::vector<std::int64_t> kept;
    for (std::size_t i = 0; i < addresses_.size(); ++i)
        if (sent_total_[i] >= opts_.min_sent) kept.push_back(static_cast<std::int64_t>(i));
    std::sort(kept.begin(), kept.end(), [&](std::int64_t a, std::int64_t b) {
        return addresses_[a] < addresses_[b];
    });
    std::vector<std::int64_t> to_new(addresses_.size(), -1);
    for (std::size_t i = 0; i < kept.size(); ++i) to_new[kept[i]] = static_cast<std::int64_t>(i);
    sum.n_nodes = kept.size();

    std::vector<edge> edges;
    for (const std::uint64_t key : pairs_) {
        const std::int64_t a = to_new[key >> 32];
        const std::int64_t b = to_new[key & 0xffffffffULL];
        if (a < 0 || b < 0) continue;
        edges.emplace_back(static_cast<node_id>(std::min(a, b)),
                           static_cast<node_id>(std::max(a, b)));
    }
    std::sort(edges.begin(), edges.end());
    sum.n_edges = edges.size();

    dataset_manifest m;
    m.edges_path = out_dir + "/edges.tsv";
    m.series_path = out_dir + "/series.csv";
    m.layout = series_layout::long_fmt;
    m.labels_path = out_dir + "/labels.tsv";
    m.has_origin = true;
    m.t_origin = opts_.range_begin;
    m.step_seconds = 86400;
    m.n_steps = n_days_;
    m.n_nodes = kept.size();

    {
        auto out = std::ofstream(m.edges_path);
        if (!out) fail(errc::write_error, "cannot open " + m.edges_path);
        out << "# src\tdst\n";
        for (const auto& [u, v] : edges) out << u << '\t' << v << '\n';
        if (!out.flush()) fail(errc::write_error, "failed writing " + m.edges_path);
    }
    {
        std::vector<std::tuple<std::int64_t, std::uint64_t, std::int64_t>> rows;
        rows.reserve(daily_sent_.size());
        for (const auto& [key, count] : daily_sent_) {
            const std::int64_t nid = to_new[key >> 32];
            if (nid < 0) continue;
            rows.emplace_back(nid, key & 0xffffffffULL, count);
        }
        std::sort(rows.begin(), rows.end());
        auto out = std::ofstream(m.series_path);
        if (!out) fail(errc::write_error, "cannot open " + m.series_path);
        for (const auto& [nid, day, count] : rows) out << nid << ',' << day << ',' << count << '\n';
        if (!out.flush()) fail(errc::write_error, "failed writing " + m.series_path);
    }
    {
        auto out = std::ofstream(m.labels_path);
        if (!out) fail(errc::write_error, "cannot open " + m.labels_path);
        for (std::size_t i = 0; i < kept.size(); ++i)
            out << i << '\t' << addresses_[kept[i]] << '\n';
        if (!out.flush()) fail(errc::write_error, "failed writing " + m.labels_path);
    }
    save_manifest(m, out_dir + "/manifest.json");
    if (manifest_out != nullptr) *manifest_out = m;

    MEMNET_LOG_INFO("ingest: %zu emails seen, %zu in range, %zu malformed; %zu/%zu addresses "
                    "kept, %zu edges, %zu days",
                    sum.emails_seen, sum.emails_in_range, sum.malformed, sum.n_nodes,
                    sum.addresses_seen, sum.n_edges, sum.n_steps);
    return sum;
}

} // namespace memnet::io
