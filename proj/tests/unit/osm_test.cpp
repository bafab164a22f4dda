#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "ovid/error.hpp"
#include "ovid/osm_json.hpp"
#include "ovid/osm_xml.hpp"
#include "ovid/vocabulary.hpp"

using namespace ovid;

namespace {

std::string dump(const std::string& body) { return "<osm version=\"0.6\">" + body + "</osm>"; }

std::string change(const std::string& body) { return "<osmChange version=\"0.6\">" + body + "</osmChange>"; }

} // namespace

TEST(ChangesetMetadata, DirectFieldMapping) {
    const auto parsed = parse_changeset_metadata(
        dump(R"(<changeset id="7" uid="3" created_at="2019-01-01T00:00:00Z" min_lat="1" min_lon="2" max_lat="3" )"
             R"(max_lon="4"><tag k="comment" v="fix"/></changeset>)"));
    ASSERT_EQ(parsed.changesets.size(), 1U);
    const Changeset& c = parsed.changesets[0];
    EXPECT_EQ(c.id, 7);
    EXPECT_EQ(c.user_id, 3);
    EXPECT_EQ(c.comment, "fix");
    ASSERT_TRUE(c.declared_bbox);
    EXPECT_EQ(*c.declared_bbox, (BoundingBox{1, 2, 3, 4}));
    EXPECT_TRUE(c.edits.empty());
}

TEST(ChangesetMetadata, AbsenceDefaults) {
    const auto parsed =
        parse_changeset_metadata(dump(R"(<changeset id="8" uid="3" created_at="2019-01-01T00:00:00Z"/>)"));
    ASSERT_EQ(parsed.changesets.size(), 1U);
    const Changeset& c = parsed.changesets[0];
    EXPECT_EQ(c.comment, "");
    EXPECT_EQ(c.editor, "");
    EXPECT_FALSE(c.imagery_used);
    EXPECT_FALSE(c.declared_bbox);
}

TEST(ChangesetMetadata, InvertedBboxKeptAsGiven) {
    const auto parsed = parse_changeset_metadata(dump(
        R"(<changeset id="9" uid="3" created_at="2019-01-01T00:00:00Z" min_lat="4" min_lon="0" max_lat="1" max_lon="1"/>)"));
    ASSERT_TRUE(parsed.changesets[0].declared_bbox);
    EXPECT_EQ(parsed.changesets[0].declared_bbox->min_lat, 4.0);
    EXPECT_EQ(parsed.changesets[0].declared_bbox->max_lat, 1.0);
}

TEST(ChangesetMetadata, CommitTimePrefersClosedAt) {
    const auto parsed = parse_changeset_metadata(dump(
        R"(<changeset id="1" uid="3" created_at="2019-01-01T00:00:00Z" closed_at="2019-01-01T01:00:00Z"/>)"));
    EXPECT_EQ(parsed.changesets[0].commit_time.to_iso(), "2019-01-01T01:00:00Z");
}

TEST(ChangesetMetadata, EditorAndImagery) {
    const auto parsed = parse_changeset_metadata(
        dump(R"(<changeset id="1" uid="3" created_at="2019-01-01T00:00:00Z"><tag k="created_by" v="JOSM/1.5"/>)"
             R"(<tag k="imagery_used" v="Bing"/></changeset>)"
             R"(<changeset id="2" uid="3" created_at="2019-01-01T00:00:00Z"><tag k="imagery_used" v="no"/></changeset>)"));
    ASSERT_EQ(parsed.changesets.size(), 2U);
    EXPECT_EQ(parsed.changesets[0].editor, "JOSM/1.5");
    EXPECT_TRUE(parsed.changesets[0].imagery_used);
    EXPECT_FALSE(parsed.changesets[1].imagery_used);
}

TEST(ChangesetMetadata, MissingRequiredAttributeSkipsRecord) {
    const auto parsed = parse_changeset_metadata(
        dump(R"(<changeset uid="3" created_at="2019-01-01T00:00:00Z"/>)"
             R"(<changeset id="2" created_at="2019-01-01T00:00:00Z"/>)"
             R"(<changeset id="3" uid="1"/>)"
             R"(<changeset id="4" uid="1" created_at="2019-01-01T00:00:00Z"/>)"));
    EXPECT_EQ(parsed.changesets.size(), 1U);
    EXPECT_EQ(parsed.skipped_missing_attribute, 3U);
}

TEST(ChangesetMetadata, MalformedXmlReportsPosition) {
    try {
        parse_changeset_metadata("<osm>\n<changeset id=\"1\" uid=\"1\"\n</osm>");
        FAIL() << "expected MalformedXml";
    } catch (const MalformedXml& e) {
        EXPECT_GE(e.line(), 2U);
        EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
    }
}

TEST(OsmChange, CreateNodeFiltered) {
    const std::string doc = change(
        R"(<create><node id="9" version="1" changeset="7" lat="50.0" lon="8.0" timestamp="2019-01-01T00:00:00Z"/></create>)");
    const auto edits = parse_osmchange(doc, 7);
    ASSERT_EQ(edits.edits.size(), 1U);
    const Edit& e = edits.edits[0];
    EXPECT_EQ(e.operation, Operation::Create);
    EXPECT_EQ(e.object.id, 9);
    EXPECT_EQ(e.object.kind, ObjectKind::Node);
    EXPECT_EQ(e.new_version, 1);
    ASSERT_TRUE(e.object.location.point);
    EXPECT_EQ(e.object.location.point->lat, 50.0);
    EXPECT_EQ(e.object.location.point->lon, 8.0);
    EXPECT_TRUE(parse_osmchange(doc, 8).edits.empty());
}

TEST(OsmChange, DocumentOrderPreserved) {
    const std::string doc = change(
        R"(<create><node id="9" version="1" changeset="7" lat="1" lon="1" timestamp="2019-01-01T00:00:00Z"><tag k="a" v="b"/></node></create>)"
        R"(<delete><node id="9" version="2" changeset="7" lat="1" lon="1" timestamp="2019-01-01T00:00:01Z"><tag k="a" v="b"/></node></delete>)");
    const auto edits = parse_osmchange(doc, 7).edits;
    ASSERT_EQ(edits.size(), 2U);
    EXPECT_EQ(edits[0].new_version, 1);
    EXPECT_EQ(edits[1].new_version, 2);
    EXPECT_EQ(edits[1].operation, Operation::Delete);
    // deletes keep identity only
    EXPECT_TRUE(edits[1].object.tags.empty());
    EXPECT_FALSE(edits[1].object.location.point);
}

TEST(OsmChange, WayAndRelationMembers) {
    const std::string doc = change(
        R"(<modify><way id="5" version="3" changeset="1" timestamp="2019-01-01T00:00:00Z"><nd ref="1"/><nd ref="2"/>)"
        R"(<tag k="highway" v="residential"/></way>)"
        R"(<relation id="6" version="2" changeset="1" timestamp="2019-01-01T00:00:00Z"><member type="way" ref="5" role="outer"/>)"
        R"(<member type="node" ref="1" role=""/></relation></modify>)");
    const auto edits = parse_osmchange(doc, 1).edits;
    ASSERT_EQ(edits.size(), 2U);
    EXPECT_EQ(edits[0].object.location.node_refs, (std::vector<ObjectId>{1, 2}));
    EXPECT_EQ(edits[0].object.tags.at("highway"), "residential");
    ASSERT_EQ(edits[1].object.location.members.size(), 2U);
    EXPECT_EQ(edits[1].object.location.members[0], (Member{ObjectKind::Way, 5, "outer"}));
}

TEST(OsmChange, UnknownAndInvalidElementsAreCounted) {
    const std::string doc = change(
        R"(<create><area id="1" version="1" changeset="1" timestamp="2019-01-01T00:00:00Z"/>)"
        R"(<node id="2" version="3" changeset="1" lat="0" lon="0" timestamp="2019-01-01T00:00:00Z"/>)"
        R"(<node id="3" version="1" changeset="1" lat="0" lon="0" timestamp="2019-01-01T00:00:00Z"/></create>)");
    const OsmChange parsed = parse_osmchange(doc);
    EXPECT_EQ(parsed.entries.size(), 1U);
    EXPECT_EQ(parsed.skipped_unknown, 1U);
    EXPECT_EQ(parsed.skipped_invalid, 1U);
}

TEST(OsmChange, AttachRaisesCommitTime) {
    auto meta = parse_changeset_metadata(
        dump(R"(<changeset id="1" uid="1" created_at="2019-01-01T00:00:00Z"/>)"));
    const OsmChange parsed = parse_osmchange(change(
        R"(<create><node id="3" version="1" changeset="1" lat="0" lon="0" timestamp="2019-01-01T00:05:00Z"/>)"
        R"(<node id="4" version="1" changeset="99" lat="0" lon="0" timestamp="2019-01-01T00:05:00Z"/></create>)"));
    const AttachReport report = attach_edits(meta.changesets, parsed.entries);
    EXPECT_EQ(report.orphan_edits, 1U);
    EXPECT_EQ(report.commit_time_adjusted, 1U);
    EXPECT_EQ(meta.changesets[0].commit_time.to_iso(), "2019-01-01T00:05:00Z");
    ASSERT_EQ(meta.changesets[0].edits.size(), 1U);
}

TEST(Serialization, EscapingRoundTrip) {
    Changeset c;
    c.id = 11;
    c.user_id = 2;
    c.user_name = "a&b <\"c\">";
    c.comment = "line\nbreak\ttab 'quote' ü";
    c.commit_time = Timestamp(1546300800);
    Edit e;
    e.object.id = 1;
    e.object.tags = {{"name", "x<y"}, {"note", "a\"b"}};
    e.object.location.point = LatLon{0.1, -179.999999999};
    e.timestamp = c.commit_time;
    c.edits.push_back(e);
    const std::vector<Changeset> in{c};
    auto meta = parse_changeset_metadata(write_changeset_dump(in));
    attach_edits(meta.changesets, parse_osmchange(write_osmchange(in)).entries);
    ASSERT_EQ(meta.changesets.size(), 1U);
    EXPECT_EQ(meta.changesets[0], c);
}

TEST(Serialization, JsonKeyOrderIsFixed) {
    Changeset c;
    c.id = 1;
    const Json j = to_json(c);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) {
        keys.push_back(k);
    }
    EXPECT_EQ(keys, (std::vector<std::string>{"id", "user_id", "user_name", "commit_time", "comment", "editor",
                                              "imagery_used", "bbox", "edits"}));
}

TEST(Serialization, JsonLinesRoundTrip) {
    Changeset c;
    c.id = 3;
    c.declared_bbox = BoundingBox{1.5, 2, -3, 4};
    Edit e;
    e.object.id = 8;
    e.object.kind = ObjectKind::Relation;
    e.object.version = 2;
    e.new_version = 2;
    e.operation = Operation::Modify;
    e.object.location.members = {Member{ObjectKind::Node, 4, "stop"}};
    c.edits.push_back(e);
    std::ostringstream out;
    write_changesets_jsonl(out, std::vector<Changeset>{c});
    std::istringstream in(out.str());
    const auto back = read_changesets_jsonl(in);
    ASSERT_EQ(back.size(), 1U);
    EXPECT_EQ(back[0], c);
}

TEST(Vocabulary, KeyLists) {
    EXPECT_EQ(default_top12_keys(),
              (std::vector<std::string>{"building", "highway", "name", "surface", "source", "addr:housenumber",
                                        "addr:street", "natural", "landuse", "waterway", "amenity", "power"}));
    const auto& valid = default_valid_keys();
    EXPECT_EQ(valid.size(), 100U);
    EXPECT_EQ(KeySet(valid).size(), 100U);
    for (const auto& key : default_top12_keys()) {
        EXPECT_TRUE(KeySet(valid).contains(key)) << key;
    }
}

TEST(Vocabulary, ShippedFileMatchesDefaults) {
    std::ifstream in(std::string(OVID_DATA_DIR) + "/vocabulary.json");
    ASSERT_TRUE(in);
    const Json j = Json::parse(in);
    EXPECT_EQ(j.at("top12_keys").get<std::vector<std::string>>(), default_top12_keys());
    EXPECT_EQ(j.at("valid_keys").get<std::vector<std::string>>(), default_valid_keys());
}

TEST(Vocabulary, EditorNormalization) {
    EXPECT_EQ(normalize_editor("JOSM/1.5 (5678 en)"), "JOSM");
    EXPECT_EQ(normalize_editor("iD 2.20.1"), "iD");
    EXPECT_EQ(normalize_editor("JOSM/1.5"), "JOSM");
    EXPECT_EQ(normalize_editor(""), "");
}
