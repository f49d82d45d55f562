/** Side-by-side snapshot comparison helpers.
 *
 * The only number computed client-side is the Jaccard agreement of two
 * member lists, recomputable from the two component pages; all other
 * statistics come from the service.
 */

export function jaccard(a: Iterable<string>, b: Iterable<string>): number {
  const setA = new Set(a);
  const setB = new Set(b);
  if (setA.size === 0 && setB.size === 0) return 1;
  let shared = 0;
  for (const item of setA) {
    if (setB.has(item)) shared += 1;
  }
  return shared / (setA.size + setB.size - shared);
}

export interface SnapshotUsers {
  snapshotId: string;
  users: string[];
}

export interface ComparisonSummary {
  left: string;
  right: string;
  leftUsers: number;
  rightUsers: number;
  sharedUsers: number;
  jaccard: number;
}

export function compareSnapshots(left: SnapshotUsers, right: SnapshotUsers): ComparisonSummary {
  const setLeft = new Set(left.users);
  const setRight = new Set(right.users);
  let shared = 0;
  for (const user of setLeft) {
    if (setRight.has(user)) shared += 1;
  }
  return {
    left: left.snapshotId,
    right: right.snapshotId,
    leftUsers: setLeft.size,
    rightUsers: setRight.size,
    sharedUsers: shared,
    jaccard: jaccard(setLeft, setRight),
  };
}

/** All distinct users across a component page. */
export function usersOfComponents(components: { members: string[] }[]): string[] {
  const users = new Set<string>();
  for (const component of components) {
    for (const member of component.members) users.add(member);
  }
  return [...users].sort();
}
