// Payload shapes served by the annotation backend. These mirror the JSON
// the server emits; the UI never invents state that is not in them.

export interface VideoInfo {
  name: string;
  url: string;
  fps: number;
  frame_count: number | null;
  frame_base: number;
}

export interface ViewInfo {
  view_id: string;
  frame_offset: number;
  frame_count: number | null;
  url: string;
}

export interface BoxStyle {
  color: string;
  opacity: number;
  thickness: number;
  hidden: boolean;
}

export interface StatePayload {
  version: number;
  video: VideoInfo;
  annotator: string;
  roster: string[];
  ethogram: string[];
  self_directed: string[];
  shortcuts: {
    individuals: Record<string, string>;
    ethogram: Record<string, string>;
  };
  class_names: Record<string, string>;
  styles: Record<string, BoxStyle>;
  palette: string[];
  views: ViewInfo[];
  tracking_format: "simplified" | "extended" | null;
  track_count: number;
  detection_count: number;
  behavior_count: number;
  notes: string;
}

export interface DetectionPayload {
  track_id: number;
  x: number;
  y: number;
  w: number;
  h: number;
  det_conf: number;
  class_label: number;
  class_name: string;
  individual_id: number | null;
  id_conf: number | null;
  individual_name: string | null;
  style: BoxStyle;
}

export interface FrameDetections {
  frame: number;
  version: number;
  detections: DetectionPayload[];
}

export interface ThumbnailMeta {
  frame: number;
  time_s: number;
  video_url: string;
  detection_count: number;
  views: { view_id: string; frame: number }[];
}

export interface BehaviorPayload {
  record_id: number;
  subject: string;
  action: string;
  target: string | null;
  start_frame: number;
  end_frame: number | null;
  duration_frames: number | null;
  created_by: string;
  open: boolean;
}

export interface BehaviorListing {
  version: number;
  behaviors: BehaviorPayload[];
}

export interface CommandEnvelope {
  kind: string;
  params: Record<string, unknown>;
}

export interface CommandResult {
  version: number;
  result: Record<string, unknown>;
}

export interface SnapshotReceipt {
  file: string;
  frame: number;
  with_boxes: boolean;
}
