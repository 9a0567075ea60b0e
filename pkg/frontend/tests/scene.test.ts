import { describe, expect, it } from "vitest";

import {
  GENRE_COLORS,
  NODE_COLORS,
  ZONE_COLORS,
  buildScene,
  degreeToY,
  projectionToX,
} from "../src/scene";
import type { Cue } from "../src/types";
import { fixtureStory } from "./helpers";

const W = 900;
const H = 360;

function cueFor(set: 1 | 2 | 3, eventIndex = 0, level: 1 | 2 | 3 = 1): Cue {
  if (set === 3) {
    return {
      set,
      kind: "event_level",
      event_index: eventIndex,
      level,
      cue_index: 0,
      story_id: fixtureStory.story_id,
    };
  }
  return {
    set,
    kind: set === 1 ? "intro" : "anchor",
    target: set === 1 ? "zones" : "left",
    cue_index: 0,
    story_id: fixtureStory.story_id,
  };
}

describe("position mapping", () => {
  it("maps the extent linearly onto the panel", () => {
    const extent = fixtureStory.zones.layout.extent;
    expect(projectionToX(extent[0], extent, W)).toBeCloseTo(40);
    expect(projectionToX(extent[1], extent, W)).toBeCloseTo(W - 40);
    const mid = (extent[0] + extent[1]) / 2;
    expect(projectionToX(mid, extent, W)).toBeCloseTo(W / 2);
  });

  it("places degree 1 at the top and degree 0 on the baseline", () => {
    expect(degreeToY(0, H)).toBeCloseTo(H - 40);
    expect(degreeToY(1, H)).toBeCloseTo(20);
    expect(degreeToY(0.5, H)).toBeLessThan(degreeToY(0.25, H));
  });
});

describe("level one", () => {
  const scene = buildScene(fixtureStory, cueFor(3, 0, 1), W, H);

  it("shades the liked range green and the disliked range orange", () => {
    const byZone = Object.fromEntries(scene.bands.map((b) => [b.zone, b]));
    expect(byZone.like.color).toBe("green");
    expect(byZone.dislike.color).toBe("orange");
    expect(byZone.familiar.color).toBe(ZONE_COLORS.familiar);
    const layout = fixtureStory.zones.layout;
    expect(byZone.like.x0).toBeCloseTo(projectionToX(layout.like![0], layout.extent, W));
    expect(byZone.like.x1).toBeCloseTo(projectionToX(layout.like![1], layout.extent, W));
  });

  it("draws recommendable event nodes in the server's blue on the axis", () => {
    for (const node of scene.nodes) {
      expect(node.color).toBe(NODE_COLORS.recommendable);
      expect(node.y).toBeCloseTo(scene.axisY);
    }
  });

  it("positions every event at its projected location", () => {
    const layout = fixtureStory.zones.layout;
    fixtureStory.events.forEach((event, i) => {
      expect(scene.nodes[i].x).toBeCloseTo(
        projectionToX(event.projection, layout.extent, W),
      );
    });
  });

  it("marks the focused event", () => {
    expect(scene.nodes[0].focused).toBe(true);
    expect(scene.nodes.slice(1).every((n) => !n.focused)).toBe(true);
  });

  it("shows both anchors at their projections", () => {
    expect(scene.anchors).toHaveLength(2);
    const layout = fixtureStory.zones.layout;
    expect(scene.anchors[0].x).toBeCloseTo(
      projectionToX(fixtureStory.anchors.left!.projection, layout.extent, W),
    );
    expect(scene.anchors[1].x).toBeCloseTo(
      projectionToX(fixtureStory.anchors.right!.projection, layout.extent, W),
    );
  });
});

describe("level two", () => {
  const scene = buildScene(fixtureStory, cueFor(3, 1, 2), W, H);

  it("raises each node to its recommendation degree", () => {
    fixtureStory.events.forEach((event, i) => {
      expect(scene.nodes[i].y).toBeCloseTo(degreeToY(event.level2.degree, H));
    });
  });

  it("orders heights by degree (higher degree on top)", () => {
    const sortedByDegree = [...fixtureStory.events].sort(
      (a, b) => b.level2.degree - a.level2.degree,
    );
    const ys = sortedByDegree.map(
      (e) => scene.nodes[fixtureStory.events.indexOf(e)].y,
    );
    for (let i = 1; i < ys.length; i++) {
      expect(ys[i - 1]).toBeLessThanOrEqual(ys[i] + 1e-9);
    }
  });

  it("has no similar-movie links yet", () => {
    expect(scene.links).toHaveLength(0);
  });
});

describe("level three", () => {
  const focusIndex = 0;
  const scene = buildScene(fixtureStory, cueFor(3, focusIndex, 3), W, H);
  const event = fixtureStory.events[focusIndex];

  it("links at most four similar liked movies to the focused event", () => {
    expect(scene.links.length).toBe(event.level3.similar_liked.length);
    expect(scene.links.length).toBeLessThanOrEqual(4);
    expect(scene.similarPosters.length).toBe(scene.links.length);
  });

  it("colors links by the similar movie's genre", () => {
    event.level3.similar_liked.forEach((similar, i) => {
      const genre = similar.genres[0] ?? "unknown";
      expect(scene.links[i].color).toBe(GENRE_COLORS[genre]);
    });
  });

  it("colors event nodes by genre at this level", () => {
    fixtureStory.events.forEach((e, i) => {
      const genre = e.level1.genres[0] ?? "unknown";
      expect(scene.nodes[i].color).toBe(GENRE_COLORS[genre]);
    });
  });

  it("anchors links at the focused node", () => {
    const from = scene.nodes[focusIndex];
    for (const link of scene.links) {
      expect(link.x0).toBeCloseTo(from.x);
      expect(link.y0).toBeCloseTo(from.y);
    }
  });
});

describe("intro and anchor cues", () => {
  it("renders level one with no focused event during the interface intro", () => {
    const scene = buildScene(fixtureStory, cueFor(1), W, H);
    expect(scene.level).toBe(1);
    expect(scene.focusedEventIndex).toBeNull();
    expect(scene.introTarget).toBe("zones");
  });

  it("highlights the named anchor during the anchor set", () => {
    const scene = buildScene(fixtureStory, cueFor(2), W, H);
    expect(scene.anchors[0].highlighted).toBe(true);
    expect(scene.anchors[1].highlighted).toBe(false);
  });
});

describe("purity", () => {
  it("is a pure function of story and cue", () => {
    const a = buildScene(fixtureStory, cueFor(3, 2, 3), W, H);
    const b = buildScene(fixtureStory, cueFor(3, 2, 3), W, H);
    expect(a).toEqual(b);
  });
});
