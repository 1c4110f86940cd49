// three.js scene: hull meshes posed from snapshots, closest-point overlays.

import * as THREE from "three";
import { ConvexGeometry } from "three/examples/jsm/geometries/ConvexGeometry.js";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";
import { RenderPose, OverlaySegment } from "./poseState";
import { SceneMessage } from "./protocol";

const ROBOT_COLOR = 0xe8862e;
const OBSTACLE_COLOR = 0x5a6b7a;
const CURRENT_COLOR = 0xff3333;
const FUTURE_COLOR = 0x33aaff;

export class SceneView {
  readonly renderer: THREE.WebGLRenderer;
  readonly scene = new THREE.Scene();
  readonly camera: THREE.PerspectiveCamera;
  private controls: OrbitControls;
  private hullMeshes = new Map<string, THREE.Mesh>();
  private overlayGroup = new THREE.Group();

  constructor(canvas: HTMLCanvasElement) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.camera = new THREE.PerspectiveCamera(50, 1, 0.01, 50);
    // z is up in the robot world
    this.camera.up.set(0, 0, 1);
    this.camera.position.set(2.2, -2.2, 1.4);
    this.controls = new OrbitControls(this.camera, canvas);
    this.controls.target.set(0, 0, -0.1);
    this.scene.background = new THREE.Color(0x15191f);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.55));
    const sun = new THREE.DirectionalLight(0xffffff, 1.4);
    sun.position.set(2, -3, 4);
    this.scene.add(sun);
    this.scene.add(new THREE.GridHelper(4, 16, 0x334455, 0x223344)
      .rotateX(Math.PI / 2));
    this.scene.add(this.overlayGroup);
  }

  resize(width: number, height: number): void {
    this.renderer.setSize(width, height, false);
    this.camera.aspect = width / height;
    this.camera.updateProjectionMatrix();
  }

  /** Build static meshes once from the scene message. */
  loadScene(scene: SceneMessage): void {
    for (const mesh of this.hullMeshes.values()) this.scene.remove(mesh);
    this.hullMeshes.clear();
    for (const link of scene.robot.links) {
      for (const hull of link.hulls) {
        const mesh = this.makeHullMesh(hull.vertices, ROBOT_COLOR, 0.95);
        this.hullMeshes.set(hull.id, mesh);
        this.scene.add(mesh);
      }
    }
    for (const obst of scene.obstacles) {
      // obstacle vertices arrive already posed in the world frame
      const mesh = this.makeHullMesh(obst.vertices, OBSTACLE_COLOR, 0.85);
      this.scene.add(mesh);
    }
  }

  private makeHullMesh(vertices: number[][], color: number,
                       opacity: number): THREE.Mesh {
    const pts = vertices.map((v) => new THREE.Vector3(v[0], v[1], v[2]));
    const geometry = pts.length >= 4
      ? new ConvexGeometry(pts)
      : new THREE.SphereGeometry(0.01);
    const material = new THREE.MeshStandardMaterial({
      color, roughness: 0.6, metalness: 0.1,
      transparent: opacity < 1, opacity,
    });
    return new THREE.Mesh(geometry, material);
  }

  applyPoses(poses: Map<string, RenderPose>): void {
    for (const [id, pose] of poses) {
      const mesh = this.hullMeshes.get(id);
      if (mesh === undefined) continue;
      mesh.quaternion.copy(pose.quaternion);
      mesh.position.copy(pose.position);
    }
  }

  drawOverlays(segments: OverlaySegment[]): void {
    this.overlayGroup.clear();
    for (const seg of segments) {
      const color = seg.kind === "current" ? CURRENT_COLOR : FUTURE_COLOR;
      const geom = new THREE.BufferGeometry().setFromPoints([seg.from, seg.to]);
      this.overlayGroup.add(new THREE.Line(
        geom, new THREE.LineBasicMaterial({ color, linewidth: 2 })));
      const marker = new THREE.Mesh(
        new THREE.SphereGeometry(0.012),
        new THREE.MeshBasicMaterial({ color }));
      marker.position.copy(seg.from);
      this.overlayGroup.add(marker);
    }
  }

  render(): void {
    this.controls.update();
    this.renderer.render(this.scene, this.camera);
  }
}
